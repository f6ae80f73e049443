#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ncsattack/geometry.hpp"

namespace ncsattack::reach {

inline constexpr int kDefaultDirections = 16;

/// Convex polygon in one agent's 2D input channel that circumscribes the
/// budget disc ||u|| <= rho.
struct InputPolytope {
  std::vector<Point> vertices;  // counter-clockwise
  std::vector<Halfplane> faces;
  double rho = 0.0;

  bool contains(const Point& u, double tol = 1e-12) const;
  InputPolytope scaled(double alpha) const;
};

/// s-vertex polygon containing the rho-disc. All vertices share one radius,
/// chosen so the edge across the widest angular gap is tangent to the disc.
/// Without a seed the vertices sit at angles (k + 1/2) 2pi/s (for s = 4 an
/// axis-aligned square); with a seed the angles are jittered and rotated.
/// Throws InvalidInput for s < 3 or rho <= 0.
InputPolytope circumscribe_ball(double rho, int s, std::optional<std::uint64_t> seed = std::nullopt);

struct SupportResult {
  double gamma = 0.0;
  Eigen::VectorXd xstar;
  /// Maximizing stacked input at each step (one omega vertex per channel).
  std::vector<Eigen::VectorXd> inputs;
};

/// Support function of the h-step reach set of x_{k+1} = K_k x_k + Bsel u_k
/// from the singleton {x0}, with every 2-column channel of Bsel driven from
/// omega. Costates run backwards (lambda_k = K_k^T lambda_{k+1}), the support
/// point forwards with the vertex maximizing <lambda_{k+1}, Bsel u>.
///
/// Throws InvalidInput on dimension mismatch, an empty sequence, or a
/// non-unit direction.
SupportResult reach_support(std::span<const Eigen::MatrixXd> K_seq, const Eigen::MatrixXd& Bsel,
                            const Eigen::VectorXd& x0, const InputPolytope& omega,
                            const Eigen::VectorXd& final_dir);

/// m unit vectors at angles 2 pi k / m.
std::vector<Point> uniform_directions(int m);

/// Embeds a planar direction into the position coordinates of one agent.
Eigen::VectorXd lift_direction(const Point& dir, int agent, int dim);

struct ReachSpec {
  std::vector<Point> directions;
  int horizon = 0;
  /// supports[agent][direction]
  std::vector<std::vector<SupportResult>> supports;
};

/// Support queries for every agent and direction over `horizon` repetitions of K.
ReachSpec compute_reach_spec(const Eigen::MatrixXd& K, int horizon, const Eigen::MatrixXd& Bsel,
                             const Eigen::VectorXd& x0, const InputPolytope& omega,
                             std::span<const Point> directions, std::span<const int> agents);

struct AgentPolygon {
  int agent = 0;
  std::vector<Halfplane> halfspaces;
  std::vector<Point> vertices;  // counter-clockwise
};

/// Intersection of {p : <d_k, p> <= gamma_k}. Throws DegenerateGeometry when
/// the directions do not positively span the plane.
AgentPolygon agent_polygon(std::span<const Point> directions, int agent,
                           std::span<const double> supports);

/// Polygon of one agent read off a ReachSpec.
AgentPolygon agent_polygon(const ReachSpec& spec, int agent);

/// Per-agent polygons for agents 0..N-1.
std::vector<AgentPolygon> agent_polygons(const Eigen::MatrixXd& K, int horizon,
                                         const Eigen::MatrixXd& Bsel, const Eigen::VectorXd& x0,
                                         const InputPolytope& omega,
                                         std::span<const Point> directions);

/// min ||p - q|| over the two polygons; 0 iff they intersect.
double polygon_distance(const AgentPolygon& p, const AgentPolygon& q);

}  // namespace ncsattack::reach
