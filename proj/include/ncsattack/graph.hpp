#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ncsattack::graph {

/// Unordered node pair, stored with first < second.
using Edge = std::pair<int, int>;

/// Immutable undirected communication graph on nodes 0..n-1.
///
/// Edges are kept sorted so that two graphs with the same edge set compare
/// equal regardless of insertion order.
class Graph {
 public:
  Graph() = default;
  /// Throws InvalidInput on self-loops, duplicates or out-of-range indices.
  Graph(int n_nodes, std::vector<Edge> edges);

  int n_nodes() const noexcept { return n_nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool has_edge(int i, int j) const;
  std::vector<int> neighbors(int i) const;
  int degree(int i) const;

  Eigen::MatrixXd adjacency() const;
  Eigen::MatrixXd degree_matrix() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_nodes_ = 0;
  std::vector<Edge> edges_;
};

struct SpectralConnectivity {
  double lambda2 = 0.0;
  Eigen::VectorXd fiedler;
};

/// Deg(G) - Ad(G).
Eigen::MatrixXd laplacian(const Graph& g);

/// Second-smallest Laplacian eigenvalue and a unit eigenvector for it.
/// Throws InvalidInput for fewer than two nodes.
SpectralConnectivity algebraic_connectivity(const Graph& g);

/// Same as above for an arbitrary symmetric Laplacian-like matrix.
SpectralConnectivity algebraic_connectivity(const Eigen::MatrixXd& laplacian);

/// Throws NotFound when (i,j) is not an edge.
Graph remove_edge(const Graph& g, int i, int j);

/// Throws InvalidInput when (i,j) is already an edge or invalid.
Graph add_edge(const Graph& g, int i, int j);

bool is_connected(const Graph& g);

/// Parses "1-2, 1-3 2-4;3-5" (1-based node labels, any of `,;` or whitespace
/// as separators) into 0-based edges.
std::vector<Edge> parse_edge_list(std::string_view text);

/// Inverse of parse_edge_list: "1-2,1-3,...".
std::string format_edge_list(const std::vector<Edge>& edges);

}  // namespace ncsattack::graph
