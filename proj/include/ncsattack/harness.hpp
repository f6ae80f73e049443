#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ncsattack/attack.hpp"
#include "ncsattack/dmd.hpp"
#include "ncsattack/graph.hpp"
#include "ncsattack/laprec.hpp"
#include "ncsattack/scenario_io.hpp"

namespace ncsattack::harness {

enum class Mode { Nominal, Fdi, FdiDos };

std::string_view mode_name(Mode m);
/// Throws InvalidInput for anything but nominal, fdi, fdi_dos.
Mode parse_mode(std::string_view text);

struct StepRecord {
  long k = 0;
  Eigen::VectorXd x;
  /// Controller output at this state (empty at the final step).
  std::vector<Eigen::Vector2d> u;
  std::optional<attack::AttackDecision> attack;
  /// Index into RunRecord::graphs of the graph in force for this step.
  int graph_id = 0;
  bool dos_event = false;
};

struct DosRecord {
  long k = 0;
  laprec::RecoveryResult recovery;
  graph::Graph recovered;
  std::optional<attack::DosPlan> plan;
  /// Link actually cut; empty when the plan was a no-op or the link does not exist.
  std::optional<graph::Edge> removed;
};

struct RunRecord {
  Mode mode = Mode::Nominal;
  Experiment experiment;
  std::vector<StepRecord> steps;
  std::vector<graph::Graph> graphs;
  std::optional<DosRecord> dos;
};

/// Sliding eavesdropping window ending at step k (states k - width .. k).
dmd::SnapshotBuffer snapshot_window(const std::vector<StepRecord>& steps, long k, int width);

/// DMD operator the attacker holds at step k, fitted on the raw window.
dmd::DmdModel identify(const RunRecord& r, long k);

RunRecord run(const Experiment& e, Mode mode);

/// Position-only formation error between agents i and j.
double formation_error(const RunRecord& r, std::size_t step, int i, int j);
/// Leader state minus reference, full state norm.
double tracking_error(const RunRecord& r, std::size_t step);

struct PairSummary {
  int i = 0;
  int j = 0;
  double max_error = 0.0;
  double final_error = 0.0;
};

struct Metrics {
  std::vector<PairSummary> pairs;
  std::vector<double> tracking;
  double max_tracking = 0.0;
  double final_tracking = 0.0;
  int attacked_steps = 0;
  int target_switches = 0;
  /// First step at which the planned separation reached d_star, if any.
  std::optional<long> d_star_reached;

  double max_formation() const;
  double final_formation() const;
};

/// Empty tables for a run without steps.
Metrics metrics(const RunRecord& r);

/// Writes trajectories.csv, errors.csv, attack.csv, trajectories.svg and
/// errors.svg into out_dir (created when missing). Throws IoError with the path.
void emit(const RunRecord& r, const std::filesystem::path& out_dir);

/// Stacked states per step parsed back from trajectories.csv.
std::vector<Eigen::VectorXd> read_trajectories(const std::filesystem::path& path, int n_agents);

}  // namespace ncsattack::harness
