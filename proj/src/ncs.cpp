#include "ncsattack/ncs.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ncsattack/errors.hpp"

namespace ncsattack::ncs {

AgentModel double_integrator(double dt) {
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  AgentModel m;
  m.dt = dt;
  m.A << 1, dt, 0, 0,
         0, 1, 0, 0,
         0, 0, 1, dt,
         0, 0, 0, 1;
  m.B << dt * dt / 2, 0,
         dt, 0,
         0, dt * dt / 2,
         0, dt;
  return m;
}

Eigen::Vector4d reference(long k) {
  const double kk = static_cast<double>(k);
  const double angle = 3.0 * kk / 100.0;
  return {-kk * std::sin(angle), 1.0, -kk * std::cos(angle), 1.0};
}

Matrix24 default_gain() {
  Matrix24 k;
  k << -0.2263, -0.4712, 0, 0,
       0, 0, -0.2263, -0.4712;
  return k;
}

void Scenario::validate() const {
  if (n_agents < 1) throw InvalidInput("n_agents must be at least 1");
  if (graph.n_nodes() != n_agents)
    throw InvalidInput("edges: graph has " + std::to_string(graph.n_nodes()) +
                       " nodes but n_agents is " + std::to_string(n_agents));
  if (static_cast<int>(formation_offsets.size()) != n_agents)
    throw InvalidInput("formation_offsets: expected " + std::to_string(n_agents) + " entries");
  if (static_cast<int>(initial_states.size()) != n_agents)
    throw InvalidInput("initial_states: expected " + std::to_string(n_agents) + " entries");
  if (!(agent.dt > 0.0)) throw InvalidInput("dt must be positive");
  if (horizon_steps < 0) throw InvalidInput("horizon_steps must be non-negative");
}

std::vector<Eigen::Vector4d> default_formation_offsets() {
  return {
      {0, 0, 0, 0}, {-4, 0, -3, 0}, {4, 0, -3, 0}, {-8, 0, 0, 0}, {8, 0, 0, 0},
  };
}

std::vector<Eigen::Vector4d> random_initial_states(int n_agents, double lo, double hi,
                                                   std::uint64_t seed) {
  if (!(hi >= lo)) throw InvalidInput("initial_box: upper bound below lower bound");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(lo, hi);
  std::vector<Eigen::Vector4d> out;
  out.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    const double px = pos(rng);
    const double py = pos(rng);
    out.emplace_back(px, 0.0, py, 0.0);
  }
  return out;
}

StackedState initial_state(const Scenario& s) {
  StackedState st;
  st.k = 0;
  st.x.resize(s.dim());
  for (int i = 0; i < s.n_agents; ++i) st.x.segment<kStateDim>(kStateDim * i) = s.initial_states[i];
  return st;
}

std::vector<Eigen::Vector2d> control_inputs(const Scenario& s, const StackedState& state) {
  if (state.x.size() != s.dim()) throw InvalidInput("state length does not match scenario");
  std::vector<Eigen::Vector2d> u(s.n_agents, Eigen::Vector2d::Zero());
  for (int i = 0; i < s.n_agents; ++i) {
    const Eigen::Vector4d xi = state.agent(i);
    for (int j : s.graph.neighbors(i)) u[i] += s.gain * (xi - state.agent(j) - s.offset(i, j));
  }
  u[0] += s.leader_gain * (state.agent(0) - s.reference.at(state.k));
  return u;
}

StackedState step(const Scenario& s, const StackedState& state,
                  const std::optional<Eigen::VectorXd>& fdi) {
  if (fdi && fdi->size() != kInputDim * s.n_agents)
    throw InvalidInput("injection vector must have length 2N");
  const auto u = control_inputs(s, state);
  StackedState next;
  next.k = state.k + 1;
  next.x.resize(s.dim());
  for (int i = 0; i < s.n_agents; ++i) {
    Eigen::Vector2d ui = u[i];
    if (fdi) ui += fdi->segment<kInputDim>(kInputDim * i);
    next.x.segment<kStateDim>(kStateDim * i) = s.agent.A * state.agent(i) + s.agent.B * ui;
  }
  return next;
}

Eigen::MatrixXd stacked_closed_loop(const Scenario& s) {
  const int n = s.n_agents;
  const Eigen::Matrix4d bk = s.agent.B * s.gain;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s.dim(), s.dim());
  for (int i = 0; i < n; ++i) {
    const auto nbrs = s.graph.neighbors(i);
    Eigen::Matrix4d diag = s.agent.A + static_cast<double>(nbrs.size()) * bk;
    if (i == 0) diag += s.agent.B * s.leader_gain;
    m.block<kStateDim, kStateDim>(kStateDim * i, kStateDim * i) = diag;
    for (int j : nbrs) m.block<kStateDim, kStateDim>(kStateDim * i, kStateDim * j) = -bk;
  }
  return m;
}

Eigen::VectorXd reference_feedthrough(const Scenario& s, long k) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(s.dim());
  for (int i = 0; i < s.n_agents; ++i) {
    Eigen::Vector2d u = Eigen::Vector2d::Zero();
    for (int j : s.graph.neighbors(i)) u -= s.gain * s.offset(i, j);
    if (i == 0) u -= s.leader_gain * s.reference.at(k);
    c.segment<kStateDim>(kStateDim * i) = s.agent.B * u;
  }
  return c;
}

Eigen::MatrixXd stacked_input_map(const AgentModel& agent, int n_agents) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(kStateDim * n_agents, kInputDim * n_agents);
  for (int i = 0; i < n_agents; ++i)
    m.block<kStateDim, kInputDim>(kStateDim * i, kInputDim * i) = agent.B;
  return m;
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> eig(m, /*computeEigenvectors=*/false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace ncsattack::ncs
