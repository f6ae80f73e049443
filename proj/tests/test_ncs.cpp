#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ncsattack/errors.hpp"
#include "ncsattack/ncs.hpp"
#include "ncsattack/scenario_io.hpp"

using namespace ncsattack;
using ncs::Scenario;
using ncs::StackedState;

namespace {

Scenario two_agents() {
  Scenario s;
  s.n_agents = 2;
  s.agent = ncs::double_integrator(0.2);
  s.graph = graph::Graph(2, {{0, 1}});
  s.gain = ncs::default_gain();
  s.leader_gain = ncs::default_gain();
  s.formation_offsets = {Eigen::Vector4d::Zero(), Eigen::Vector4d(-4, 0, -3, 0)};
  s.initial_states = {Eigen::Vector4d::Zero(), Eigen::Vector4d::Zero()};
  s.horizon_steps = 10;
  return s;
}

Eigen::VectorXd random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d(0.0, 5.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

}  // namespace

TEST(Ncs, DoubleIntegratorAtDefaultStep) {
  const auto m = ncs::double_integrator(0.2);
  EXPECT_EQ(m.A.row(0), Eigen::RowVector4d(1, 0.2, 0, 0));
  EXPECT_NEAR(m.B(0, 0), 0.02, 1e-15);
  EXPECT_EQ(m.B(0, 1), 0.0);
}

TEST(Ncs, DoubleIntegratorUnitStep) {
  ncs::Matrix42 expected;
  expected << 0.5, 0, 1, 0, 0, 0.5, 0, 1;
  EXPECT_EQ(ncs::double_integrator(1.0).B, expected);
}

TEST(Ncs, DoubleIntegratorHalfStep) {
  const auto m = ncs::double_integrator(0.5);
  EXPECT_EQ(m.A(0, 1), 0.5);
  EXPECT_EQ(m.B(0, 0), 0.125);
  EXPECT_THROW(ncs::double_integrator(0.0), InvalidInput);
  EXPECT_THROW(ncs::double_integrator(-1.0), InvalidInput);
}

TEST(Ncs, ReferenceSamples) {
  EXPECT_EQ(ncs::reference(0), Eigen::Vector4d(0, 1, 0, 1));
  const auto r50 = ncs::reference(50);
  EXPECT_DOUBLE_EQ(r50(0), -50 * std::sin(1.5));
  EXPECT_DOUBLE_EQ(r50(2), -50 * std::cos(1.5));
  const auto r500 = ncs::reference(500);
  EXPECT_DOUBLE_EQ(r500(0), -500 * std::sin(15.0));
  EXPECT_DOUBLE_EQ(r500(2), -500 * std::cos(15.0));
  EXPECT_EQ(r500(1), 1.0);
  EXPECT_EQ(r500(3), 1.0);
}

TEST(Ncs, InputsVanishOnFormationAndReference) {
  auto e = harness::default_experiment();
  auto& s = e.scenario;
  const long k = 37;
  StackedState st;
  st.k = k;
  st.x.resize(s.dim());
  for (int i = 0; i < s.n_agents; ++i) st.x.segment<4>(4 * i) = s.reference.at(k) + s.formation_offsets[i];
  for (const auto& u : ncs::control_inputs(s, st)) EXPECT_LT(u.norm(), 1e-12);
}

TEST(Ncs, TwoAgentDisplacement) {
  auto s = two_agents();
  s.leader_gain.setZero();
  const double delta = 1.7;
  StackedState st;
  st.x = Eigen::VectorXd::Zero(8);
  st.x.segment<4>(4) = s.formation_offsets[1] + Eigen::Vector4d(delta, 0, 0, 0);
  const auto u = ncs::control_inputs(s, st);
  EXPECT_NEAR(u[1](0), -0.2263 * delta, 1e-15);
  EXPECT_EQ(u[1](1), 0.0);
}

TEST(Ncs, ControlInputsMatchHandAssembledSum) {
  auto e = harness::default_experiment(3);
  const auto& s = e.scenario;
  std::mt19937_64 rng(5);
  const std::vector<std::vector<int>> nbrs = {{1, 2}, {0, 3}, {0, 4}, {1}, {2}};
  for (int trial = 0; trial < 50; ++trial) {
    StackedState st;
    st.k = trial * 7;
    st.x = random_vector(rng, s.dim());
    const auto u = ncs::control_inputs(s, st);
    for (int i = 0; i < 5; ++i) {
      Eigen::Vector2d want = Eigen::Vector2d::Zero();
      for (int j : nbrs[i])
        want += s.gain * (st.x.segment<4>(4 * i) - st.x.segment<4>(4 * j) -
                          (s.formation_offsets[i] - s.formation_offsets[j]));
      if (i == 0) want += s.leader_gain * (st.x.segment<4>(0) - ncs::reference(st.k));
      EXPECT_LT((u[i] - want).norm(), 1e-12);
    }
  }
}

TEST(Ncs, StepZeroStateNoCoupling) {
  auto s = two_agents();
  s.leader_gain.setZero();
  s.formation_offsets = {Eigen::Vector4d::Zero(), Eigen::Vector4d::Zero()};
  StackedState st;
  st.x = Eigen::VectorXd::Zero(8);
  EXPECT_EQ(ncs::step(s, st, Eigen::VectorXd::Zero(4)).x, Eigen::VectorXd::Zero(8));
}

TEST(Ncs, ZeroInjectionMatchesNominal) {
  const auto e = harness::default_experiment(2);
  auto st = ncs::initial_state(e.scenario);
  for (int k = 0; k < 20; ++k) {
    const auto a = ncs::step(e.scenario, st);
    const auto b = ncs::step(e.scenario, st, Eigen::VectorXd::Zero(10));
    EXPECT_EQ(a.x, b.x);
    st = a;
  }
}

TEST(Ncs, SingleAgentUnitInjection) {
  Scenario s;
  s.n_agents = 1;
  s.agent = ncs::double_integrator(0.2);
  s.graph = graph::Graph(1, {});
  s.formation_offsets = {Eigen::Vector4d::Zero()};
  s.initial_states = {Eigen::Vector4d::Zero()};
  StackedState st;
  st.x = Eigen::VectorXd::Zero(4);
  const auto next = ncs::step(s, st, Eigen::Vector2d(1, 0));
  EXPECT_NEAR(next.x(0), 0.02, 1e-15);
  EXPECT_NEAR(next.x(1), 0.2, 1e-15);
  EXPECT_EQ(next.x(2), 0.0);
  EXPECT_THROW(ncs::step(s, st, Eigen::VectorXd::Zero(3)), InvalidInput);
}

TEST(Ncs, EdgelessClosedLoopIsBlockDiagonalA) {
  auto s = two_agents();
  s.graph = graph::Graph(2, {});
  s.leader_gain.setZero();
  const auto M = ncs::stacked_closed_loop(s);
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(8, 8);
  want.block<4, 4>(0, 0) = s.agent.A;
  want.block<4, 4>(4, 4) = s.agent.A;
  EXPECT_EQ(M, want);
}

TEST(Ncs, PairClosedLoopMatchesHandBuiltMatrix) {
  // B K has a single nonzero 2x2 pattern per axis: rows (0,1) and (2,3) take
  // [0.02, 0.2]^T times [-0.2263, -0.4712]. Worked by hand:
  const double b00 = 0.02 * -0.2263, b01 = 0.02 * -0.4712;
  const double b10 = 0.2 * -0.2263, b11 = 0.2 * -0.4712;
  Eigen::Matrix4d bk;
  bk << b00, b01, 0, 0,
        b10, b11, 0, 0,
        0, 0, b00, b01,
        0, 0, b10, b11;
  Eigen::Matrix4d a;
  a << 1, 0.2, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0.2, 0, 0, 0, 1;
  Eigen::MatrixXd want(8, 8);
  want << a + 2 * bk, -bk, -bk, a + bk;
  const auto M = ncs::stacked_closed_loop(two_agents());
  EXPECT_LT((M - want).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(M(0, 0), 0.990948, 1e-12);
  EXPECT_NEAR(M(0, 1), 0.181152, 1e-12);
  EXPECT_NEAR(M(1, 0), -0.09052, 1e-12);
  EXPECT_NEAR(M(1, 1), 0.81152, 1e-12);
  EXPECT_NEAR(M(0, 4), 0.004526, 1e-12);
}

TEST(Ncs, PathClosedLoopIsStable) {
  const auto e = harness::default_experiment();
  EXPECT_NEAR(ncs::spectral_radius(ncs::stacked_closed_loop(e.scenario)), 0.99374, 1e-5);
  EXPECT_LT(ncs::spectral_radius(ncs::stacked_closed_loop(e.scenario)), 1.0);
}

TEST(NcsProperty, StepEqualsClosedLoopPlusFeedthrough) {
  const auto e = harness::default_experiment(4);
  const auto M = ncs::stacked_closed_loop(e.scenario);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    StackedState st;
    st.k = trial * 3;
    st.x = random_vector(rng, 20);
    const auto next = ncs::step(e.scenario, st);
    const Eigen::VectorXd want = M * st.x + ncs::reference_feedthrough(e.scenario, st.k);
    EXPECT_LT((next.x - want).norm(), 1e-10 * std::max(1.0, want.norm()));
  }
}

TEST(NcsProperty, ErrorDynamicsSuperpose) {
  // With the affine terms removed the map is linear.
  auto e = harness::default_experiment();
  auto& s = e.scenario;
  s.reference.kind = ncs::Reference::Kind::Constant;
  for (auto& o : s.formation_offsets) o.setZero();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    StackedState a{0, random_vector(rng, 20)}, b{0, random_vector(rng, 20)};
    const double al = coef(rng), be = coef(rng);
    StackedState mix{0, al * a.x + be * b.x};
    const Eigen::VectorXd lhs = ncs::step(s, mix).x;
    const Eigen::VectorXd rhs = al * ncs::step(s, a).x + be * ncs::step(s, b).x;
    EXPECT_LT((lhs - rhs).norm(), 1e-10 * std::max(1.0, rhs.norm()));
  }
}

TEST(Ncs, RandomInitialStatesAreSeededAndBoxed) {
  const auto a = ncs::random_initial_states(5, -10, 10, 42);
  const auto b = ncs::random_initial_states(5, -10, 10, 42);
  const auto c = ncs::random_initial_states(5, -10, 10, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (const auto& x : a) {
    EXPECT_GE(x(0), -10);
    EXPECT_LE(x(0), 10);
    EXPECT_EQ(x(1), 0.0);
    EXPECT_EQ(x(3), 0.0);
  }
}

TEST(Ncs, OffsetsAreConsistent) {
  const auto s = harness::default_experiment().scenario;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      EXPECT_EQ(s.offset(i, j), -s.offset(j, i));
      for (int k = 0; k < 5; ++k) EXPECT_LT((s.offset(i, j) - (s.offset(i, k) + s.offset(k, j))).norm(), 1e-14);
    }
}

TEST(Ncs, ValidateNamesField) {
  auto s = harness::default_experiment().scenario;
  s.formation_offsets.pop_back();
  try {
    s.validate();
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("formation_offsets"), std::string::npos);
  }
}
