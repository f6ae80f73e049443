#include "ncsattack/attack.hpp"

#include <cmath>

#include "ncsattack/errors.hpp"

namespace ncsattack::attack {

namespace {

constexpr double kFiedlerTieTol = 1e-9;

void check_pair(AgentPair t, int n_agents) {
  if (t.first == t.second) throw InvalidInput("targets must be distinct agents");
  if (t.first < 0 || t.second < 0 || t.first >= n_agents || t.second >= n_agents)
    throw InvalidInput("target index out of range");
}

}  // namespace

void AttackConfig::validate() const {
  if (!(rho > 0.0)) throw InvalidInput("rho must be positive");
  if (!(d_star > 0.0)) throw InvalidInput("d_star must be positive");
  if (s < 3) throw InvalidInput("s must be at least 3");
  if (start_step < 0) throw InvalidInput("start_step must be non-negative");
  if (dos && dos->step < 0) throw InvalidInput("dos_step must be non-negative");
}

AgentPair select_targets(const std::vector<reach::AgentPolygon>& polygons) {
  if (polygons.size() < 2) throw InvalidInput("target selection needs at least two agents");
  AgentPair best{0, 1};
  double best_d = -1.0;
  for (std::size_t i = 0; i < polygons.size(); ++i) {
    for (std::size_t j = i + 1; j < polygons.size(); ++j) {
      const double d = reach::polygon_distance(polygons[i], polygons[j]);
      if (d > best_d) {
        best_d = d;
        best = {polygons[i].agent, polygons[j].agent};
      }
    }
  }
  return best;
}

Eigen::MatrixXd selection_matrix(AgentPair targets, int n_agents, const ncs::Matrix42& B) {
  check_pair(targets, n_agents);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(ncs::kStateDim * n_agents, ncs::kInputDim * n_agents);
  for (int a : {targets.first, targets.second})
    m.block<ncs::kStateDim, ncs::kInputDim>(ncs::kStateDim * a, ncs::kInputDim * a) = B;
  return m;
}

Eigen::VectorXd embed_injection(AgentPair targets, int n_agents, const Eigen::Vector2d& u_i,
                                const Eigen::Vector2d& u_j) {
  check_pair(targets, n_agents);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(ncs::kInputDim * n_agents);
  u.segment<2>(ncs::kInputDim * targets.first) = u_i;
  u.segment<2>(ncs::kInputDim * targets.second) = u_j;
  return u;
}

std::vector<Eigen::Vector2d> candidate_inputs(const reach::InputPolytope& omega) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(omega.vertices.size());
  for (const auto& v : omega.vertices) {
    const double r = v.norm();
    out.push_back(r > omega.rho ? Eigen::Vector2d(v * (omega.rho / r)) : Eigen::Vector2d(v));
  }
  return out;
}

double score_injection(const dmd::DmdModel& model, const PlanningContext& ctx,
                       const Eigen::VectorXd& state, AgentPair targets, const Eigen::VectorXd& u_a) {
  const int dim = static_cast<int>(state.size());
  const int n = dim / ncs::kStateDim;
  check_pair(targets, n);
  const Eigen::MatrixXd Bsel = selection_matrix(targets, n, ctx.B);
  const Eigen::VectorXd next = dmd::predict(model, state) + Bsel * u_a;
  const Eigen::MatrixXd Ball = ncs::stacked_input_map(ncs::AgentModel{.A = {}, .B = ctx.B, .dt = 0.0}, n);
  const int agents[] = {targets.first, targets.second};
  const auto spec = reach::compute_reach_spec(model.K, ctx.horizon, Ball, next, ctx.omega,
                                              ctx.directions, agents);
  return reach::polygon_distance(reach::agent_polygon(spec, targets.first),
                                 reach::agent_polygon(spec, targets.second));
}

AttackDecision synthesize_fdi(long k, AgentPair targets, const dmd::DmdModel& model,
                              const PlanningContext& ctx, const Eigen::VectorXd& state) {
  const int n = static_cast<int>(state.size()) / ncs::kStateDim;
  check_pair(targets, n);
  const auto cands = candidate_inputs(ctx.omega);

  AttackDecision d;
  d.k = k;
  d.targets = targets;
  double best = -1.0;
  auto consider = [&](const Eigen::VectorXd& u) {
    const double sc = score_injection(model, ctx, state, targets, u);
    if (sc > best) {
      best = sc;
      d.u_a = u;
    }
    return sc;
  };
  for (const auto& ui : cands)
    for (const auto& uj : cands) consider(embed_injection(targets, n, ui, uj));
  d.separation_before = consider(Eigen::VectorXd::Zero(ncs::kInputDim * n));
  d.separation_after = best;
  return d;
}

std::optional<DosPlan> plan_dos(const Eigen::MatrixXd& lap) {
  const graph::Graph g = laprec::recovered_graph(lap);
  if (g.n_nodes() < 2 || !graph::is_connected(g)) return std::nullopt;
  const auto conn = graph::algebraic_connectivity(laprec::project_laplacian_cone(lap));

  int node = -1;
  double best = -1.0;
  for (int i = 1; i < g.n_nodes(); ++i) {
    const double mag = std::abs(conn.fiedler(i));
    if (mag >= best - kFiedlerTieTol) {
      node = i;
      best = std::max(best, mag);
    }
  }
  if (node < 0) return std::nullopt;

  std::optional<DosPlan> plan;
  double best_l2 = 0.0;
  for (int j : g.neighbors(node)) {
    const graph::Edge e{std::min(node, j), std::max(node, j)};
    const double l2 = graph::algebraic_connectivity(graph::remove_edge(g, e.first, e.second)).lambda2;
    if (!plan || l2 < best_l2 - kFiedlerTieTol) {
      plan = DosPlan{node, e};
      best_l2 = l2;
    }
  }
  return plan;
}

std::optional<DosPlan> plan_dos(const laprec::RecoveryResult& recovery) {
  return plan_dos(recovery.model.L);
}

}  // namespace ncsattack::attack
