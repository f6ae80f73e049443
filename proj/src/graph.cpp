#include "ncsattack/graph.hpp"

#include <algorithm>
#include <charconv>
#include <queue>
#include <string>

#include "ncsattack/errors.hpp"

namespace ncsattack::graph {

namespace {

Edge normalized(int i, int j) { return i < j ? Edge{i, j} : Edge{j, i}; }

}  // namespace

Graph::Graph(int n_nodes, std::vector<Edge> edges) : n_nodes_(n_nodes) {
  if (n_nodes < 1) throw InvalidInput("graph needs at least one node");
  for (auto& e : edges) {
    if (e.first == e.second)
      throw InvalidInput("self-loop at node " + std::to_string(e.first));
    if (e.first < 0 || e.second < 0 || e.first >= n_nodes || e.second >= n_nodes)
      throw InvalidInput("edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                         ") out of range for " + std::to_string(n_nodes) + " nodes");
    e = normalized(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw InvalidInput("duplicate edge");
  edges_ = std::move(edges);
}

bool Graph::has_edge(int i, int j) const {
  return std::binary_search(edges_.begin(), edges_.end(), normalized(i, j));
}

std::vector<int> Graph::neighbors(int i) const {
  std::vector<int> out;
  for (const auto& [a, b] : edges_) {
    if (a == i) out.push_back(b);
    if (b == i) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int Graph::degree(int i) const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [i](const Edge& e) {
    return e.first == i || e.second == i;
  }));
}

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_nodes_, n_nodes_);
  for (const auto& [i, j] : edges_) a(i, j) = a(j, i) = 1.0;
  return a;
}

Eigen::MatrixXd Graph::degree_matrix() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_nodes_, n_nodes_);
  for (const auto& [i, j] : edges_) {
    d(i, i) += 1.0;
    d(j, j) += 1.0;
  }
  return d;
}

Eigen::MatrixXd laplacian(const Graph& g) { return g.degree_matrix() - g.adjacency(); }

SpectralConnectivity algebraic_connectivity(const Eigen::MatrixXd& lap) {
  if (lap.rows() < 2 || lap.rows() != lap.cols())
    throw InvalidInput("algebraic connectivity needs a square matrix with at least two nodes");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
  if (eig.info() != Eigen::Success) throw InvalidInput("eigendecomposition failed");
  // Eigenvalues come back in ascending order.
  SpectralConnectivity out;
  out.lambda2 = std::max(0.0, eig.eigenvalues()(1));
  out.fiedler = eig.eigenvectors().col(1).normalized();
  return out;
}

SpectralConnectivity algebraic_connectivity(const Graph& g) {
  if (g.n_nodes() < 2) throw InvalidInput("algebraic connectivity needs at least two nodes");
  return algebraic_connectivity(laplacian(g));
}

Graph remove_edge(const Graph& g, int i, int j) {
  if (!g.has_edge(i, j))
    throw NotFound("edge (" + std::to_string(i) + "," + std::to_string(j) + ") not in graph");
  std::vector<Edge> kept;
  const Edge target = normalized(i, j);
  std::copy_if(g.edges().begin(), g.edges().end(), std::back_inserter(kept),
               [&](const Edge& e) { return e != target; });
  return Graph(g.n_nodes(), std::move(kept));
}

Graph add_edge(const Graph& g, int i, int j) {
  auto edges = g.edges();
  edges.push_back(normalized(i, j));
  return Graph(g.n_nodes(), std::move(edges));
}

bool is_connected(const Graph& g) {
  const int n = g.n_nodes();
  std::vector<std::vector<int>> adj(n);
  for (const auto& [i, j] : g.edges()) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == n;
}

std::vector<Edge> parse_edge_list(std::string_view text) {
  std::vector<Edge> edges;
  auto is_sep = [](char c) { return c == ',' || c == ';' || c == ' ' || c == '\t'; };
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_sep(text[pos])) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !is_sep(text[end])) ++end;
    const std::string_view token = text.substr(pos, end - pos);
    const auto dash = token.find('-');
    int a = 0;
    int b = 0;
    bool ok = dash != std::string_view::npos;
    if (ok) {
      auto r1 = std::from_chars(token.data(), token.data() + dash, a);
      auto r2 = std::from_chars(token.data() + dash + 1, token.data() + token.size(), b);
      ok = r1.ec == std::errc{} && r1.ptr == token.data() + dash && r2.ec == std::errc{} &&
           r2.ptr == token.data() + token.size();
    }
    if (!ok || a < 1 || b < 1)
      throw InvalidInput("malformed edge '" + std::string(token) + "' (expected i-j, 1-based)");
    edges.emplace_back(a - 1, b - 1);
    pos = end;
  }
  return edges;
}

std::string format_edge_list(const std::vector<Edge>& edges) {
  std::string out;
  for (const auto& [i, j] : edges) {
    if (!out.empty()) out += ',';
    out += std::to_string(i + 1) + "-" + std::to_string(j + 1);
  }
  return out;
}

}  // namespace ncsattack::graph
