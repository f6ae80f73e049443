#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "ncsattack/csv.hpp"
#include "ncsattack/errors.hpp"
#include "ncsattack/harness.hpp"

using namespace ncsattack;
namespace fs = std::filesystem;

namespace {

harness::Experiment short_experiment(std::uint64_t seed, int steps) {
  auto e = harness::default_experiment(seed);
  e.scenario.horizon_steps = steps;
  return e;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("ncsattack_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Harness, ModeNames) {
  for (auto m : {harness::Mode::Nominal, harness::Mode::Fdi, harness::Mode::FdiDos})
    EXPECT_EQ(harness::parse_mode(harness::mode_name(m)), m);
  EXPECT_EQ(harness::mode_name(harness::Mode::FdiDos), "fdi_dos");
  EXPECT_THROW(harness::parse_mode("dos"), InvalidInput);
  EXPECT_THROW(harness::parse_mode(""), InvalidInput);
}

TEST(Harness, ZeroLengthRun) {
  const auto r = harness::run(short_experiment(1, 0), harness::Mode::FdiDos);
  ASSERT_EQ(r.steps.size(), 1u);
  const auto m = harness::metrics(r);
  EXPECT_EQ(m.attacked_steps, 0);
  EXPECT_FALSE(r.dos);
  EXPECT_EQ(m.pairs.size(), 10u);
  EXPECT_EQ(m.tracking.size(), 1u);
}

TEST(Harness, NominalMatchesDirectSimulation) {
  const auto e = short_experiment(3, 40);
  const auto r = harness::run(e, harness::Mode::Nominal);
  auto state = ncs::initial_state(e.scenario);
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    EXPECT_EQ(r.steps[k].x, state.x);
    EXPECT_FALSE(r.steps[k].attack);
    state = ncs::step(e.scenario, state, std::nullopt);
  }
}

TEST(Harness, AttackWindowAndBudget) {
  const auto e = short_experiment(2, 70);
  const auto r = harness::run(e, harness::Mode::Fdi);
  for (const auto& st : r.steps) {
    const bool expect = st.k >= e.attack.start_step && st.k < e.scenario.horizon_steps;
    ASSERT_EQ(st.attack.has_value(), expect) << st.k;
    if (!expect) continue;
    const auto [i, j] = st.attack->targets;
    EXPECT_LT(i, j);
    for (int a = 0; a < 5; ++a) {
      const double norm = st.attack->u_a.segment<2>(2 * a).norm();
      if (a == i || a == j) EXPECT_LE(norm, e.attack.rho + 1e-12);
      else EXPECT_EQ(norm, 0.0);
    }
  }
  EXPECT_EQ(harness::metrics(r).attacked_steps, 70 - 51);
}

TEST(Harness, ZeroBudgetFdiEqualsNominal) {
  auto e = short_experiment(5, 80);
  e.attack.rho = 0.0;
  const auto a = harness::run(e, harness::Mode::Fdi);
  const auto b = harness::run(e, harness::Mode::Nominal);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (std::size_t k = 0; k < a.steps.size(); ++k) EXPECT_EQ(a.steps[k].x, b.steps[k].x);
}

TEST(Harness, ExplicitDosEdgeIsCut) {
  auto e = short_experiment(1, 120);
  e.attack.dos->edge = graph::Edge(2, 4);
  const auto r = harness::run(e, harness::Mode::FdiDos);
  ASSERT_TRUE(r.dos);
  ASSERT_TRUE(r.dos->removed);
  EXPECT_EQ(*r.dos->removed, graph::Edge(2, 4));
  ASSERT_EQ(r.graphs.size(), 2u);
  EXPECT_FALSE(r.graphs[1].has_edge(2, 4));
  EXPECT_EQ(r.steps[99].graph_id, 0);
  EXPECT_EQ(r.steps[100].graph_id, 1);
  EXPECT_TRUE(r.steps[100].dos_event);
}

TEST(Harness, DosOnAbsentLinkIsNoOp) {
  auto e = short_experiment(1, 110);
  e.attack.dos->edge = graph::Edge(0, 4);
  const auto r = harness::run(e, harness::Mode::FdiDos);
  ASSERT_TRUE(r.dos);
  EXPECT_FALSE(r.dos->removed);
  EXPECT_EQ(r.graphs.size(), 1u);
}

TEST(Harness, IdentifyUsesTrailingWindow) {
  const auto r = harness::run(short_experiment(4, 120), harness::Mode::Nominal);
  const auto buf = harness::snapshot_window(r.steps, 100, 50);
  EXPECT_EQ(buf.size(), 51);
  EXPECT_EQ(Eigen::VectorXd(buf.X_plus().col(49)), r.steps[100].x);
  EXPECT_EQ(Eigen::VectorXd(buf.X().col(0)), r.steps[50].x);
  const auto early = harness::snapshot_window(r.steps, 10, 50);
  EXPECT_EQ(early.size(), 11);
}

TEST(Harness, ConstantReferenceConverges) {
  auto e = short_experiment(6, 500);
  e.scenario.reference.kind = ncs::Reference::Kind::Constant;
  e.scenario.reference.constant = Eigen::Vector4d(3, 0, -2, 0);
  const auto m = harness::metrics(harness::run(e, harness::Mode::Nominal));
  EXPECT_LT(m.final_formation(), 0.05);
  EXPECT_LT(m.final_tracking, 0.05);
  EXPECT_LT(m.final_formation(), m.max_formation());
}

TEST(Harness, EmitWritesTablesAndPlots) {
  const auto r = harness::run(short_experiment(1, 60), harness::Mode::Fdi);
  const auto dir = scratch("emit");
  harness::emit(r, dir);
  for (const char* f : {"trajectories.csv", "errors.csv", "attack.csv", "trajectories.svg", "errors.svg"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_EQ(csv::read_rows(dir / "trajectories.csv").size(), 1u + 61u * 5u);
  EXPECT_EQ(csv::read_rows(dir / "errors.csv").size(), 1u + 61u * 10u);
  const auto atk = csv::read_rows(dir / "attack.csv");
  EXPECT_EQ(atk.size(), 1u + 9u);
  EXPECT_EQ(atk.front().size(), 10u);
  EXPECT_EQ(csv::read_rows(dir / "errors.csv")[1][1], "0-1");
  EXPECT_NE(slurp(dir / "errors.svg").find("</svg>"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Harness, EmitIsByteIdenticalAndRoundTrips) {
  const auto e = short_experiment(7, 130);
  const auto a = scratch("a");
  const auto b = scratch("b");
  const auto ra = harness::run(e, harness::Mode::FdiDos);
  harness::emit(ra, a);
  harness::emit(harness::run(e, harness::Mode::FdiDos), b);
  for (const char* f : {"trajectories.csv", "errors.csv", "attack.csv", "trajectories.svg", "errors.svg"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  const auto back = harness::read_trajectories(a / "trajectories.csv", 5);
  ASSERT_EQ(back.size(), ra.steps.size());
  for (std::size_t k = 0; k < back.size(); ++k) EXPECT_EQ(back[k], ra.steps[k].x);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Harness, EmitToUnwritablePathIsIoError) {
  const auto r = harness::run(short_experiment(1, 2), harness::Mode::Nominal);
  EXPECT_THROW(harness::emit(r, "/proc/ncsattack_no_such_dir"), IoError);
}
