#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ncsattack/csv.hpp"
#include "ncsattack/dmd.hpp"
#include "ncsattack/errors.hpp"
#include "ncsattack/harness.hpp"
#include "ncsattack/laprec.hpp"
#include "ncsattack/reachset.hpp"
#include "ncsattack/scenario_io.hpp"
#include "ncsattack/svg.hpp"

namespace fs = std::filesystem;
using namespace ncsattack;

namespace {

harness::Experiment load(const std::string& path, const std::optional<std::uint64_t>& seed) {
  auto e = path.empty() ? harness::default_experiment() : harness::load_experiment(path);
  if (seed) e.reseed(*seed);
  return e;
}

void print_summary(const harness::RunRecord& r, std::ostream& os) {
  const auto m = harness::metrics(r);
  os << harness::mode_name(r.mode) << ": steps=" << r.steps.size()
     << " max_formation=" << m.max_formation() << " final_formation=" << m.final_formation()
     << " max_tracking=" << m.max_tracking << " final_tracking=" << m.final_tracking
     << " attacked_steps=" << m.attacked_steps << '\n';
  if (r.dos) {
    const auto& d = *r.dos;
    os << "  dos at step " << d.k << ": recovery gamma=" << d.recovery.gamma
       << " sweeps=" << d.recovery.iterations << (d.recovery.converged ? "" : " (not converged)")
       << " recovered_edges=" << graph::format_edge_list(d.recovered.edges());
    if (!d.plan) os << " plan=none (recovered graph already disconnected)";
    else if (!d.removed)
      os << " planned link " << graph::format_edge_list({d.plan->edge}) << " absent from the network, skipped";
    else os << " cut link " << graph::format_edge_list({*d.removed});
    os << '\n';
  }
}

int simulate(const std::string& scenario, const std::string& mode, const std::string& out,
             const std::optional<std::uint64_t>& seed) {
  const auto e = load(scenario, seed);
  std::vector<harness::Mode> modes;
  if (mode == "all") modes = {harness::Mode::Nominal, harness::Mode::Fdi, harness::Mode::FdiDos};
  else modes = {harness::parse_mode(mode)};

  std::vector<std::optional<harness::RunRecord>> records(modes.size());
  std::vector<std::exception_ptr> failures(modes.size());
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    workers.emplace_back([&, i] {
      try {
        records[i] = harness::run(e, modes[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);

  for (std::size_t i = 0; i < modes.size(); ++i) {
    const fs::path dir = modes.size() == 1 ? fs::path(out) : fs::path(out) / harness::mode_name(modes[i]);
    harness::emit(*records[i], dir);
    print_summary(*records[i], std::cout);
  }
  return 0;
}

harness::RunRecord run_until(const harness::Experiment& e, const std::string& mode, long at) {
  if (at < 1 || at > e.scenario.horizon_steps)
    throw InvalidInput("at: step must lie in [1, horizon_steps]");
  auto trimmed = e;
  trimmed.scenario.horizon_steps = static_cast<int>(at);
  return harness::run(trimmed, harness::parse_mode(mode));
}

int dmd_export(const std::string& scenario, const std::string& mode, long at, const std::string& out,
               const std::optional<std::uint64_t>& seed) {
  const auto e = load(scenario, seed);
  const auto rec = run_until(e, mode, at);
  const auto buf = harness::snapshot_window(rec.steps, at, e.dmd_width);
  const auto model = harness::identify(rec, at);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create " + out + ": " + ec.message());
  csv::write_matrix(fs::path(out) / "K.csv", model.K);
  csv::write_matrix(fs::path(out) / "X.csv", buf.X());
  csv::write_matrix(fs::path(out) / "X_plus.csv", buf.X_plus());
  std::cout << "K " << model.K.rows() << "x" << model.K.cols() << " rank=" << model.rank_used
            << " residual=" << model.residual << '\n';
  return 0;
}

int reachset_dump(const std::string& scenario, const std::string& mode, long at, int horizon,
                  const std::string& out, const std::optional<std::uint64_t>& seed) {
  auto e = load(scenario, seed);
  if (horizon < 1) throw InvalidInput("horizon must be at least 1");
  const auto rec = run_until(e, mode, at);
  const auto model = harness::identify(rec, at);
  const double rho = e.attack.rho > 0.0 ? e.attack.rho : 0.05;
  const auto omega = reach::circumscribe_ball(rho, e.attack.s, e.attack.polytope_seed);
  const auto dirs = reach::uniform_directions(e.reach_directions);
  const auto bsel = ncs::stacked_input_map(e.scenario.agent, e.scenario.n_agents);
  const Eigen::VectorXd x0 = rec.steps.back().x;
  std::vector<int> agents(e.scenario.n_agents);
  for (int i = 0; i < e.scenario.n_agents; ++i) agents[i] = i;
  const auto spec = reach::compute_reach_spec(model.K, horizon, bsel, x0, omega, dirs, agents);

  std::vector<csv::Row> sup{{"agent", "dir_x", "dir_y", "gamma"}};
  std::vector<csv::Row> verts{{"step", "agent", "vertex", "x", "y"}};
  std::vector<svg::Series> outlines;
  for (int i = 0; i < e.scenario.n_agents; ++i) {
    for (std::size_t d = 0; d < dirs.size(); ++d)
      sup.push_back({std::to_string(i), csv::format_double(dirs[d](0)), csv::format_double(dirs[d](1)),
                     csv::format_double(spec.supports[i][d].gamma)});
    const auto poly = reach::agent_polygon(spec, i);
    svg::Series outline{"UAV " + std::to_string(i), {}, {}};
    for (std::size_t v = 0; v <= poly.vertices.size(); ++v) {
      const auto& p = poly.vertices[v % poly.vertices.size()];
      outline.x.push_back(p(0));
      outline.y.push_back(p(1));
      if (v < poly.vertices.size())
        verts.push_back({std::to_string(at + horizon), std::to_string(i), std::to_string(v),
                         csv::format_double(p(0)), csv::format_double(p(1))});
    }
    outlines.push_back(std::move(outline));
  }
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create " + out + ": " + ec.message());
  csv::write_rows(fs::path(out) / "supports.csv", sup);
  csv::write_rows(fs::path(out) / "polygons.csv", verts);
  svg::write_file(fs::path(out) / "polygons.svg",
                  svg::line_plot({"Reach sets at step " + std::to_string(at + horizon), "x [m]", "y [m]", 720, 560, true},
                                 outlines));
  std::cout << "reach sets at step " << at << " + " << horizon << " for " << e.scenario.n_agents << " agents\n";
  return 0;
}

int recover_laplacian(const std::string& input, const std::string& out, const laprec::RecoveryOptions& opts) {
  const auto K = csv::read_matrix(input);
  const auto res = laprec::recover(K, opts);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create " + out + ": " + ec.message());
  csv::write_matrix(fs::path(out) / "L.csv", res.model.L);
  csv::write_matrix(fs::path(out) / "S.csv", res.model.S);
  csv::write_matrix(fs::path(out) / "T.csv", res.model.T);
  std::vector<csv::Row> trace{{"iteration", "frobenius_residual", "gamma"}};
  for (const auto& it : res.trace)
    trace.push_back({std::to_string(it.iteration), csv::format_double(it.frobenius_residual),
                     csv::format_double(it.gamma)});
  csv::write_rows(fs::path(out) / "trace.csv", trace);
  std::cout << "gamma=" << res.gamma << " sweeps=" << res.iterations
            << (res.converged ? " converged" : " not converged")
            << " edges=" << graph::format_edge_list(laprec::recovered_graph(res.model.L).edges()) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Formation-control simulator with learning-based FDI and DoS attacks"};
  app.require_subcommand(1);

  std::string scenario, mode = "nominal", out = "out", input;
  std::optional<std::uint64_t> seed;
  long at = 100;
  int horizon = 1;
  laprec::RecoveryOptions ropts;

  auto* sim = app.add_subcommand("simulate", "Run nominal, fdi, fdi_dos (or all) and write CSV/SVG");
  sim->add_option("--scenario", scenario, "Scenario file (defaults built in when omitted)");
  sim->add_option("--mode", mode, "nominal|fdi|fdi_dos|all");
  sim->add_option("--out", out, "Output directory")->required();
  sim->add_option("--seed", seed, "Override rng_seed");

  auto* dmdc = app.add_subcommand("dmd-export", "Write the DMD operator fitted at a step");
  dmdc->add_option("--scenario", scenario, "Scenario file");
  dmdc->add_option("--mode", mode, "nominal|fdi|fdi_dos");
  dmdc->add_option("--at", at, "Step whose window is fitted");
  dmdc->add_option("--out", out, "Output directory")->required();
  dmdc->add_option("--seed", seed, "Override rng_seed");

  auto* rs = app.add_subcommand("reachset-dump", "Write per-agent reach polygons at a step");
  rs->add_option("--scenario", scenario, "Scenario file");
  rs->add_option("--mode", mode, "nominal|fdi|fdi_dos");
  rs->add_option("--at", at, "Launch step")->required();
  rs->add_option("--horizon", horizon, "Steps ahead")->required();
  rs->add_option("--out", out, "Output directory")->required();
  rs->add_option("--seed", seed, "Override rng_seed");

  auto* rl = app.add_subcommand("recover-laplacian", "Factor K into S + T (x) L");
  rl->add_option("--input", input, "K as headerless CSV")->required();
  rl->add_option("--out", out, "Output directory")->required();
  rl->add_option("--threshold", ropts.threshold, "Gamma improvement cutoff");
  rl->add_option("--max-iters", ropts.max_iters, "Sweep limit");
  rl->add_option("--seed", ropts.seed, "Initialization seed");
  rl->add_option("--block-size", ropts.block_size, "Per-agent block side");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return simulate(scenario, mode, out, seed);
    if (*dmdc) return dmd_export(scenario, mode, at, out, seed);
    if (*rs) return reachset_dump(scenario, mode, at, horizon, out, seed);
    if (*rl) return recover_laplacian(input, out, ropts);
  } catch (const Error& err) {
    std::cerr << "error[" << err.kind() << "]: " << err.what() << '\n';
    return err.exit_code();
  } catch (const std::exception& err) {
    std::cerr << "error[Internal]: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
