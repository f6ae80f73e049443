#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ncsattack/graph.hpp"

namespace ncsattack::ncs {

inline constexpr int kStateDim = 4;  // [x, vx, y, vy]
inline constexpr int kInputDim = 2;  // [ax, ay]

using Matrix42 = Eigen::Matrix<double, kStateDim, kInputDim>;
using Matrix24 = Eigen::Matrix<double, kInputDim, kStateDim>;

/// Planar double integrator sampled with period dt (seconds).
struct AgentModel {
  Eigen::Matrix4d A = Eigen::Matrix4d::Identity();
  Matrix42 B = Matrix42::Zero();
  double dt = 0.0;
};

/// Throws InvalidInput when dt <= 0.
AgentModel double_integrator(double dt);

/// Spiral formation reference [-k sin(3k/100), 1, -k cos(3k/100), 1].
Eigen::Vector4d reference(long k);

/// Reference trajectory fed to the leader. The spiral is the default; a
/// constant hold point is available for configurations that want a
/// dynamically consistent target.
struct Reference {
  enum class Kind { Spiral, Constant };
  Kind kind = Kind::Spiral;
  Eigen::Vector4d constant = Eigen::Vector4d::Zero();

  Eigen::Vector4d at(long k) const { return kind == Kind::Spiral ? reference(k) : constant; }
};

/// Default 5-UAV gain; used for both K_ij and the leader.
Matrix24 default_gain();

/// Ground-truth formation-control plant. Agent 0 is the leader.
struct Scenario {
  int n_agents = 0;
  AgentModel agent;
  graph::Graph graph;
  Matrix24 gain = Matrix24::Zero();
  Matrix24 leader_gain = Matrix24::Zero();
  /// Desired per-agent states x*_i; the pairwise targets are x*_i - x*_j.
  std::vector<Eigen::Vector4d> formation_offsets;
  Reference reference;
  int horizon_steps = 0;
  std::vector<Eigen::Vector4d> initial_states;
  std::uint64_t rng_seed = 0;

  Eigen::Vector4d offset(int i, int j) const { return formation_offsets[i] - formation_offsets[j]; }
  int dim() const { return kStateDim * n_agents; }
  /// Throws InvalidInput naming the inconsistent field.
  void validate() const;
};

/// Stacked state in agent-major order: agent 0's [x, vx, y, vy], agent 1's, ...
struct StackedState {
  long k = 0;
  Eigen::VectorXd x;

  Eigen::Vector4d agent(int i) const { return x.segment<kStateDim>(kStateDim * i); }
  Eigen::Vector2d position(int i) const { return {x(kStateDim * i), x(kStateDim * i + 2)}; }
};

/// Pentagon-like layout: leader at the origin, wingmen at (-4,-3), (4,-3),
/// (-8,0), (8,0); zero velocity offsets.
std::vector<Eigen::Vector4d> default_formation_offsets();

/// Random positions uniformly in [lo, hi]^2, zero velocities.
std::vector<Eigen::Vector4d> random_initial_states(int n_agents, double lo, double hi,
                                                   std::uint64_t seed);

StackedState initial_state(const Scenario& s);

/// Per-agent control inputs u_i at state.k under s.graph.
std::vector<Eigen::Vector2d> control_inputs(const Scenario& s, const StackedState& state);

/// x_{i,k+1} = A x_{i,k} + B (u_{i,k} + u^a_{i,k}). The injection, when
/// given, is the stacked 2N actuator-channel vector.
StackedState step(const Scenario& s, const StackedState& state,
                  const std::optional<Eigen::VectorXd>& fdi = std::nullopt);

/// One-step closed-loop matrix assembled block-wise from the control law:
/// (i,i) = A + |N_i| B K (+ B K_1 for the leader), (i,j) = -B K for j in N_i.
Eigen::MatrixXd stacked_closed_loop(const Scenario& s);

/// Affine term c_k so that step(x) = stacked_closed_loop(s) x + c_k without
/// injection.
Eigen::VectorXd reference_feedthrough(const Scenario& s, long k);

/// Block-diagonal actuator map diag(B, ..., B), 4N x 2N.
Eigen::MatrixXd stacked_input_map(const AgentModel& agent, int n_agents);

double spectral_radius(const Eigen::MatrixXd& m);

}  // namespace ncsattack::ncs
