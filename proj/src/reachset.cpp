#include "ncsattack/reachset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ncsattack/errors.hpp"
#include "ncsattack/ncs.hpp"

namespace ncsattack::reach {

bool InputPolytope::contains(const Point& u, double tol) const {
  return std::all_of(faces.begin(), faces.end(),
                     [&](const Halfplane& f) { return f.normal.dot(u) <= f.offset + tol; });
}

InputPolytope InputPolytope::scaled(double alpha) const {
  InputPolytope out = *this;
  for (auto& v : out.vertices) v *= alpha;
  for (auto& f : out.faces) f.offset *= alpha;
  out.rho *= alpha;
  return out;
}

InputPolytope circumscribe_ball(double rho, int s, std::optional<std::uint64_t> seed) {
  if (s < 3) throw InvalidInput("input polytope needs at least 3 faces");
  if (!(rho > 0.0)) throw InvalidInput("input budget rho must be positive");

  const double spacing = 2.0 * std::numbers::pi / s;
  std::vector<double> angles(s);
  if (seed) {
    std::mt19937_64 rng(*seed);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    std::uniform_real_distribution<double> rotation(0.0, spacing);
    const double phase = rotation(rng);
    for (int k = 0; k < s; ++k) angles[k] = phase + (k + 0.5 + jitter(rng)) * spacing;
  } else {
    for (int k = 0; k < s; ++k) angles[k] = (k + 0.5) * spacing;
  }

  double max_gap = 0.0;
  for (int k = 0; k < s; ++k) {
    const double next = k + 1 < s ? angles[k + 1] : angles[0] + 2.0 * std::numbers::pi;
    max_gap = std::max(max_gap, next - angles[k]);
  }
  const double radius = rho / std::cos(max_gap / 2.0);

  InputPolytope poly;
  poly.rho = rho;
  for (double a : angles) poly.vertices.emplace_back(radius * std::cos(a), radius * std::sin(a));
  for (int k = 0; k < s; ++k) {
    const Point& a = poly.vertices[k];
    const Point& b = poly.vertices[(k + 1) % s];
    const Point e = b - a;
    const Point n = Point(e.y(), -e.x()).normalized();
    poly.faces.push_back({n, n.dot(a)});
  }
  return poly;
}

SupportResult reach_support(std::span<const Eigen::MatrixXd> K_seq, const Eigen::MatrixXd& Bsel,
                            const Eigen::VectorXd& x0, const InputPolytope& omega,
                            const Eigen::VectorXd& final_dir) {
  const auto h = static_cast<int>(K_seq.size());
  if (h < 1) throw InvalidInput("reach horizon must be at least one step");
  const auto dim = x0.size();
  for (const auto& K : K_seq) {
    if (K.rows() != dim || K.cols() != dim) throw InvalidInput("K has the wrong shape");
  }
  if (Bsel.rows() != dim || Bsel.cols() % ncs::kInputDim != 0)
    throw InvalidInput("injection map must be dim x 2m");
  if (final_dir.size() != dim) throw InvalidInput("direction has the wrong length");
  if (std::abs(final_dir.norm() - 1.0) > 1e-9) throw InvalidInput("direction must be a unit vector");
  if (omega.vertices.empty()) throw InvalidInput("input polytope has no vertices");

  std::vector<Eigen::VectorXd> costate(h + 1);
  costate[h] = final_dir;
  for (int k = h - 1; k >= 0; --k) costate[k] = K_seq[k].transpose() * costate[k + 1];

  const auto channels = Bsel.cols() / ncs::kInputDim;
  SupportResult out;
  out.inputs.reserve(h);
  Eigen::VectorXd x = x0;
  for (int k = 0; k < h; ++k) {
    const Eigen::VectorXd weight = Bsel.transpose() * costate[k + 1];
    Eigen::VectorXd u(Bsel.cols());
    for (Eigen::Index c = 0; c < channels; ++c) {
      const Point w = weight.segment<ncs::kInputDim>(ncs::kInputDim * c);
      std::size_t best = 0;
      double best_val = w.dot(omega.vertices[0]);
      for (std::size_t v = 1; v < omega.vertices.size(); ++v) {
        const double val = w.dot(omega.vertices[v]);
        if (val > best_val) {
          best_val = val;
          best = v;
        }
      }
      u.segment<ncs::kInputDim>(ncs::kInputDim * c) = omega.vertices[best];
    }
    x = K_seq[k] * x + Bsel * u;
    out.inputs.push_back(std::move(u));
  }
  out.gamma = final_dir.dot(x);
  out.xstar = std::move(x);
  return out;
}

std::vector<Point> uniform_directions(int m) {
  std::vector<Point> dirs;
  dirs.reserve(m);
  for (int k = 0; k < m; ++k) {
    const double a = 2.0 * std::numbers::pi * k / m;
    dirs.emplace_back(std::cos(a), std::sin(a));
  }
  return dirs;
}

Eigen::VectorXd lift_direction(const Point& dir, int agent, int dim) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dim);
  d(ncs::kStateDim * agent) = dir.x();
  d(ncs::kStateDim * agent + 2) = dir.y();
  return d.normalized();
}

ReachSpec compute_reach_spec(const Eigen::MatrixXd& K, int horizon, const Eigen::MatrixXd& Bsel,
                             const Eigen::VectorXd& x0, const InputPolytope& omega,
                             std::span<const Point> directions, std::span<const int> agents) {
  const std::vector<Eigen::MatrixXd> seq(std::max(horizon, 0), K);
  const int n_agents = static_cast<int>(x0.size() / ncs::kStateDim);
  ReachSpec spec;
  spec.directions.assign(directions.begin(), directions.end());
  spec.horizon = horizon;
  spec.supports.resize(n_agents);
  for (int a : agents) {
    if (a < 0 || a >= n_agents) throw InvalidInput("agent index out of range");
    auto& row = spec.supports[a];
    row.reserve(directions.size());
    for (const auto& d : directions)
      row.push_back(reach_support(seq, Bsel, x0, omega, lift_direction(d, a, static_cast<int>(x0.size()))));
  }
  return spec;
}

AgentPolygon agent_polygon(std::span<const Point> directions, int agent,
                           std::span<const double> supports) {
  if (directions.size() != supports.size())
    throw InvalidInput("one support value per direction required");
  if (directions.size() < 3) throw DegenerateGeometry("need at least three query directions");
  AgentPolygon poly;
  poly.agent = agent;
  poly.halfspaces.reserve(directions.size());
  for (std::size_t i = 0; i < directions.size(); ++i)
    poly.halfspaces.push_back({directions[i], supports[i]});
  poly.vertices = intersect_halfplanes(poly.halfspaces);
  return poly;
}

AgentPolygon agent_polygon(const ReachSpec& spec, int agent) {
  const auto& row = spec.supports.at(agent);
  std::vector<double> gammas;
  gammas.reserve(row.size());
  for (const auto& s : row) gammas.push_back(s.gamma);
  return agent_polygon(spec.directions, agent, gammas);
}

std::vector<AgentPolygon> agent_polygons(const Eigen::MatrixXd& K, int horizon,
                                         const Eigen::MatrixXd& Bsel, const Eigen::VectorXd& x0,
                                         const InputPolytope& omega,
                                         std::span<const Point> directions) {
  const int n_agents = static_cast<int>(x0.size() / ncs::kStateDim);
  std::vector<int> agents(n_agents);
  for (int i = 0; i < n_agents; ++i) agents[i] = i;
  const auto spec = compute_reach_spec(K, horizon, Bsel, x0, omega, directions, agents);
  std::vector<AgentPolygon> out;
  out.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i) out.push_back(agent_polygon(spec, i));
  return out;
}

double polygon_distance(const AgentPolygon& p, const AgentPolygon& q) {
  return convex_polygon_distance(p.vertices, q.vertices);
}

}  // namespace ncsattack::reach
