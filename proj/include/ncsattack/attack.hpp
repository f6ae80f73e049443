#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ncsattack/dmd.hpp"
#include "ncsattack/graph.hpp"
#include "ncsattack/laprec.hpp"
#include "ncsattack/ncs.hpp"
#include "ncsattack/reachset.hpp"

namespace ncsattack::attack {

using AgentPair = std::pair<int, int>;

struct DosEvent {
  int step = 100;
  /// Link to cut. When empty the link is planned from the recovered Laplacian.
  std::optional<graph::Edge> edge;
};

struct AttackConfig {
  double rho = 0.05;
  double d_star = 1.0;
  int s = 8;
  int start_step = 51;
  std::optional<DosEvent> dos;
  /// Seeds the jitter of the input polytope; deterministic layout when empty.
  std::optional<std::uint64_t> polytope_seed;

  /// Throws InvalidInput naming the offending field.
  void validate() const;
};

struct AttackDecision {
  long k = 0;
  AgentPair targets{0, 1};
  Eigen::VectorXd u_a;  // stacked 2N actuator injection
  double separation_before = 0.0;
  double separation_after = 0.0;
};

/// What the attacker needs besides the identified model.
struct PlanningContext {
  ncs::Matrix42 B = ncs::Matrix42::Zero();
  reach::InputPolytope omega;
  std::vector<reach::Point> directions = reach::uniform_directions(reach::kDefaultDirections);
  int horizon = 1;
};

/// Pair of agents whose polygons are farthest apart; ties go to the
/// lexicographically smallest pair.
AgentPair select_targets(const std::vector<reach::AgentPolygon>& polygons);

/// 4N x 2N map with B at the blocks of the two targets.
Eigen::MatrixXd selection_matrix(AgentPair targets, int n_agents, const ncs::Matrix42& B);

/// Stacked 2N injection carrying u_i and u_j at the target channels.
Eigen::VectorXd embed_injection(AgentPair targets, int n_agents, const Eigen::Vector2d& u_i,
                                const Eigen::Vector2d& u_j);

/// Per-target inputs tried by synthesize_fdi: omega's vertices pulled onto
/// the rho-circle.
std::vector<Eigen::Vector2d> candidate_inputs(const reach::InputPolytope& omega);

/// Polygons of the two targets after one step of x -> K x + Bsel u, scored by
/// their distance.
double score_injection(const dmd::DmdModel& model, const PlanningContext& ctx,
                       const Eigen::VectorXd& state, AgentPair targets, const Eigen::VectorXd& u_a);

/// Scores the s^2 vertex pairs in order, then the zero injection, and keeps
/// the first maximizer. separation_before is the zero injection's score.
AttackDecision synthesize_fdi(long k, AgentPair targets, const dmd::DmdModel& model,
                              const PlanningContext& ctx, const Eigen::VectorXd& state);

struct DosPlan {
  int node = 0;
  graph::Edge edge{0, 0};
};

/// Non-leader node with the largest Fiedler magnitude in the recovered L, and
/// its incident link whose removal lowers lambda_2 the most. Empty when the
/// recovered graph is already disconnected or the node has no link.
std::optional<DosPlan> plan_dos(const laprec::RecoveryResult& recovery);

/// Same, from a Laplacian directly.
std::optional<DosPlan> plan_dos(const Eigen::MatrixXd& laplacian);

}  // namespace ncsattack::attack
