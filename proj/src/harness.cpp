#include "ncsattack/harness.hpp"

#include <algorithm>
#include <cmath>

#include "ncsattack/csv.hpp"
#include "ncsattack/errors.hpp"
#include "ncsattack/svg.hpp"

namespace ncsattack::harness {

namespace fs = std::filesystem;

dmd::DmdModel identify(const RunRecord& r, long k) {
  return dmd::fit(snapshot_window(r.steps, k, r.experiment.dmd_width), r.experiment.svd_tol);
}


std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::Nominal: return "nominal";
    case Mode::Fdi: return "fdi";
    case Mode::FdiDos: return "fdi_dos";
  }
  return "nominal";
}

Mode parse_mode(std::string_view text) {
  if (text == "nominal") return Mode::Nominal;
  if (text == "fdi") return Mode::Fdi;
  if (text == "fdi_dos") return Mode::FdiDos;
  throw InvalidInput("mode: expected nominal, fdi or fdi_dos, got '" + std::string(text) + "'");
}

dmd::SnapshotBuffer snapshot_window(const std::vector<StepRecord>& steps, long k, int width) {
  if (steps.empty()) throw InsufficientData("no recorded states");
  if (k < 0 || k >= static_cast<long>(steps.size()))
    throw InvalidInput("step " + std::to_string(k) + " is outside the run");
  dmd::SnapshotBuffer buf(width, static_cast<int>(steps.front().x.size()));
  for (long i = std::max(0L, k - width); i <= k; ++i) buf.push(steps[i].x);
  return buf;
}

RunRecord run(const Experiment& e, Mode mode) {
  e.validate();
  RunRecord rec;
  rec.mode = mode;
  rec.experiment = e;

  ncs::Scenario plant = e.scenario;
  rec.graphs.push_back(plant.graph);
  const int n = plant.n_agents;
  const bool attacking = mode != Mode::Nominal && e.attack.rho > 0.0;

  attack::PlanningContext ctx;
  ctx.B = plant.agent.B;
  ctx.horizon = e.reach_horizon;
  ctx.directions = reach::uniform_directions(e.reach_directions);
  if (attacking) ctx.omega = reach::circumscribe_ball(e.attack.rho, e.attack.s, e.attack.polytope_seed);
  const Eigen::MatrixXd b_all = ncs::stacked_input_map(plant.agent, n);

  dmd::SnapshotBuffer buffer(e.dmd_width, plant.dim());
  ncs::StackedState state = ncs::initial_state(plant);
  rec.steps.reserve(static_cast<std::size_t>(plant.horizon_steps) + 1);

  for (long k = 0;; ++k) {
    StepRecord sr;
    sr.k = k;
    sr.x = state.x;
    buffer.push(state.x);

    if (k == plant.horizon_steps) {
      sr.graph_id = static_cast<int>(rec.graphs.size()) - 1;
      rec.steps.push_back(std::move(sr));
      break;
    }

    if (mode == Mode::FdiDos && e.attack.dos && k == e.attack.dos->step) {
      DosRecord dr;
      dr.k = k;
      const auto model = dmd::fit(buffer, e.svd_tol);
      dr.recovery = laprec::recover(model.K, e.recovery);
      dr.recovered = laprec::recovered_graph(dr.recovery.model.L);
      if (e.attack.dos->edge) {
        const auto [a, b] = *e.attack.dos->edge;
        dr.plan = attack::DosPlan{std::max(a, b), {std::min(a, b), std::max(a, b)}};
      } else {
        dr.plan = attack::plan_dos(dr.recovery);
      }
      if (dr.plan && plant.graph.has_edge(dr.plan->edge.first, dr.plan->edge.second)) {
        plant.graph = graph::remove_edge(plant.graph, dr.plan->edge.first, dr.plan->edge.second);
        rec.graphs.push_back(plant.graph);
        dr.removed = dr.plan->edge;
        sr.dos_event = true;
      }
      rec.dos = std::move(dr);
    }
    sr.graph_id = static_cast<int>(rec.graphs.size()) - 1;

    std::optional<Eigen::VectorXd> injection;
    if (attacking && k >= e.attack.start_step && buffer.fittable()) {
      const auto model = dmd::fit(buffer, e.svd_tol);
      const auto polys =
          reach::agent_polygons(model.K, e.reach_horizon, b_all, state.x, ctx.omega, ctx.directions);
      const auto targets = attack::select_targets(polys);
      auto decision = attack::synthesize_fdi(k, targets, model, ctx, state.x);
      injection = decision.u_a;
      sr.attack = std::move(decision);
    }

    sr.u = ncs::control_inputs(plant, state);
    state = ncs::step(plant, state, injection);
    rec.steps.push_back(std::move(sr));
  }
  return rec;
}

double formation_error(const RunRecord& r, std::size_t step, int i, int j) {
  const auto& s = r.experiment.scenario;
  const Eigen::VectorXd& x = r.steps.at(step).x;
  const Eigen::Vector4d d = x.segment<4>(4 * i) - x.segment<4>(4 * j) - s.offset(i, j);
  return std::hypot(d(0), d(2));
}

double tracking_error(const RunRecord& r, std::size_t step) {
  const auto& st = r.steps.at(step);
  return (st.x.head<4>() - r.experiment.scenario.reference.at(st.k)).norm();
}

double Metrics::max_formation() const {
  double m = 0.0;
  for (const auto& p : pairs) m = std::max(m, p.max_error);
  return m;
}

double Metrics::final_formation() const {
  double m = 0.0;
  for (const auto& p : pairs) m = std::max(m, p.final_error);
  return m;
}

Metrics metrics(const RunRecord& r) {
  Metrics m;
  if (r.steps.empty()) return m;
  const int n = r.experiment.scenario.n_agents;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      PairSummary p{i, j, 0.0, 0.0};
      for (std::size_t k = 0; k < r.steps.size(); ++k) p.max_error = std::max(p.max_error, formation_error(r, k, i, j));
      p.final_error = formation_error(r, r.steps.size() - 1, i, j);
      m.pairs.push_back(p);
    }
  }
  std::optional<attack::AgentPair> last;
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    m.tracking.push_back(tracking_error(r, k));
    const auto& a = r.steps[k].attack;
    if (!a) continue;
    ++m.attacked_steps;
    if (last && *last != a->targets) ++m.target_switches;
    last = a->targets;
    if (!m.d_star_reached && a->separation_after >= r.experiment.attack.d_star) m.d_star_reached = a->k;
  }
  m.max_tracking = *std::max_element(m.tracking.begin(), m.tracking.end());
  m.final_tracking = m.tracking.back();
  return m;
}

namespace {

std::string pair_label(int i, int j) { return std::to_string(i) + "-" + std::to_string(j); }

}  // namespace

void emit(const RunRecord& r, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const auto& s = r.experiment.scenario;
  const int n = s.n_agents;
  const double dt = s.agent.dt;
  using csv::format_double;

  std::vector<csv::Row> traj{{"k", "t", "agent", "x", "vx", "y", "vy"}};
  for (const auto& st : r.steps) {
    const std::string k = std::to_string(st.k);
    const std::string t = format_double(static_cast<double>(st.k) * dt);
    for (int i = 0; i < n; ++i) {
      traj.push_back({k, t, std::to_string(i), format_double(st.x(4 * i)), format_double(st.x(4 * i + 1)),
                      format_double(st.x(4 * i + 2)), format_double(st.x(4 * i + 3))});
    }
  }
  csv::write_rows(out_dir / "trajectories.csv", traj);

  std::vector<csv::Row> errs{{"k", "pair", "e"}};
  for (std::size_t k = 0; k < r.steps.size(); ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        errs.push_back({std::to_string(r.steps[k].k), pair_label(i, j), format_double(formation_error(r, k, i, j))});
  csv::write_rows(out_dir / "errors.csv", errs);

  std::vector<csv::Row> atk{{"step", "i", "j", "ui_x", "ui_y", "uj_x", "uj_y", "separation_before",
                             "separation_after", "dos_event"}};
  for (const auto& st : r.steps) {
    if (st.attack) {
      const auto& a = *st.attack;
      const auto [i, j] = a.targets;
      atk.push_back({std::to_string(st.k), std::to_string(i), std::to_string(j), format_double(a.u_a(2 * i)),
                     format_double(a.u_a(2 * i + 1)), format_double(a.u_a(2 * j)), format_double(a.u_a(2 * j + 1)),
                     format_double(a.separation_before), format_double(a.separation_after),
                     st.dos_event ? "1" : "0"});
    } else if (st.dos_event) {
      atk.push_back({std::to_string(st.k), "", "", "", "", "", "", "", "", "1"});
    }
  }
  csv::write_rows(out_dir / "attack.csv", atk);

  std::vector<svg::Series> paths;
  for (int i = 0; i < n; ++i) {
    svg::Series ser{"UAV " + std::to_string(i), {}, {}};
    for (const auto& st : r.steps) {
      ser.x.push_back(st.x(4 * i));
      ser.y.push_back(st.x(4 * i + 2));
    }
    paths.push_back(std::move(ser));
  }
  svg::write_file(out_dir / "trajectories.svg",
                  svg::line_plot({"Trajectories (" + std::string(mode_name(r.mode)) + ")", "x [m]", "y [m]",
                                  720, 560, true},
                                 paths));

  std::vector<svg::Series> curves;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      svg::Series ser{"e " + pair_label(i, j), {}, {}};
      for (std::size_t k = 0; k < r.steps.size(); ++k) {
        ser.x.push_back(static_cast<double>(r.steps[k].k) * dt);
        ser.y.push_back(formation_error(r, k, i, j));
      }
      curves.push_back(std::move(ser));
    }
  }
  svg::write_file(out_dir / "errors.svg",
                  svg::line_plot({"Inter-UAV errors (" + std::string(mode_name(r.mode)) + ")", "t [s]", "e [m]"},
                                 curves));
}

std::vector<Eigen::VectorXd> read_trajectories(const fs::path& path, int n_agents) {
  const auto rows = csv::read_rows(path);
  if (rows.empty() || rows.front().size() != 7 || rows.front()[0] != "k")
    throw InvalidInput(path.string() + ": missing trajectories header");
  std::vector<Eigen::VectorXd> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 7) throw InvalidInput(path.string() + ": malformed row " + std::to_string(r + 1));
    const auto k = static_cast<std::size_t>(csv::parse_double(row[0]));
    const int agent = static_cast<int>(csv::parse_double(row[2]));
    if (agent < 0 || agent >= n_agents) throw InvalidInput(path.string() + ": agent index out of range");
    if (k >= out.size()) out.resize(k + 1, Eigen::VectorXd::Zero(4 * n_agents));
    for (int c = 0; c < 4; ++c) out[k](4 * agent + c) = csv::parse_double(row[3 + c]);
  }
  return out;
}

}  // namespace ncsattack::harness
