#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ncsattack/errors.hpp"
#include "ncsattack/ncs.hpp"
#include "ncsattack/reachset.hpp"

using namespace ncsattack;
using reach::Point;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

Point sample_in(const reach::InputPolytope& omega, std::mt19937_64& rng) {
  // convex combination of vertices, biased toward the boundary half the time
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(omega.vertices.size());
  double total = 0.0;
  for (auto& x : w) total += (x = -std::log(u(rng) + 1e-300));
  Point p = Point::Zero();
  for (std::size_t i = 0; i < w.size(); ++i) p += (w[i] / total) * omega.vertices[i];
  return p;
}

double min_face_offset(const reach::InputPolytope& p) {
  double m = INFINITY;
  for (const auto& f : p.faces) m = std::min(m, f.offset);
  return m;
}

}  // namespace

TEST(InputPolytope, DeterministicSquare) {
  const auto sq = reach::circumscribe_ball(0.3, 4);
  ASSERT_EQ(sq.faces.size(), 4u);
  for (const auto& f : sq.faces) {
    EXPECT_NEAR(f.offset, 0.3, 1e-12);
    EXPECT_NEAR(std::max(std::abs(f.normal.x()), std::abs(f.normal.y())), 1.0, 1e-12);
  }
  // disc touches the edge midpoints
  EXPECT_TRUE(sq.contains(Point(0.3, 0.0)));
  EXPECT_FALSE(sq.contains(Point(0.3 + 1e-9, 0.0), 0.0));
}

TEST(InputPolytope, OctagonContainsBudgetDisc) {
  for (std::optional<std::uint64_t> seed : {std::optional<std::uint64_t>{}, std::optional<std::uint64_t>{5}}) {
    const auto oct = reach::circumscribe_ball(0.05, 8, seed);
    EXPECT_GE(min_face_offset(oct), 0.05 - 1e-15);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
      const double r = 0.05 * std::sqrt(u(rng)), a = 2 * std::numbers::pi * u(rng);
      EXPECT_TRUE(oct.contains(Point(r * std::cos(a), r * std::sin(a))));
    }
    for (const auto& f : oct.faces)
      for (const auto& v : oct.vertices) EXPECT_LE(f.normal.dot(v), f.offset + 1e-15);
  }
}

TEST(InputPolytope, SeededOutputsKeepBudget) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto p = reach::circumscribe_ball(0.7, 3 + static_cast<int>(seed % 9), seed);
    EXPECT_GE(min_face_offset(p), 0.7 - 1e-12);
  }
}

TEST(InputPolytope, RejectsBadArguments) {
  EXPECT_THROW(reach::circumscribe_ball(1.0, 2), InvalidInput);
  EXPECT_THROW(reach::circumscribe_ball(0.0, 8), InvalidInput);
}

TEST(ReachSupport, NoInjectionChannelPropagatesPoint) {
  std::mt19937_64 rng(41);
  const Eigen::MatrixXd K = 0.5 * random_matrix(rng, 8, 8);
  const Eigen::VectorXd x0 = random_matrix(rng, 8, 1);
  const auto omega = reach::circumscribe_ball(0.1, 8);
  std::vector<Eigen::MatrixXd> seq(3, K);
  const Eigen::VectorXd dir = reach::lift_direction(Point(0.6, 0.8), 1, 8);
  const auto r = reach::reach_support(seq, Eigen::MatrixXd::Zero(8, 4), x0, omega, dir);
  EXPECT_NEAR(r.gamma, dir.dot(K * K * K * x0), 1e-12);
}

TEST(ReachSupport, OneStepMinkowskiWithSquare) {
  const auto agent = ncs::double_integrator(0.2);
  const double rho = 0.25;
  const auto sq = reach::circumscribe_ball(rho, 4);
  const Eigen::Vector4d x0(1.0, 2.0, 3.0, 4.0);
  std::vector<Eigen::MatrixXd> seq{Eigen::MatrixXd::Identity(4, 4)};
  const Eigen::MatrixXd bsel = agent.B;
  const auto r = reach::reach_support(seq, bsel, x0, sq, reach::lift_direction(Point(1, 0), 0, 4));
  EXPECT_NEAR(r.gamma, 1.0 + rho * 0.02, 1e-14);
}

TEST(ReachSupport, RejectsNonUnitDirectionAndBadShapes) {
  std::vector<Eigen::MatrixXd> seq{Eigen::MatrixXd::Identity(4, 4)};
  const auto sq = reach::circumscribe_ball(1, 4);
  EXPECT_THROW(reach::reach_support(seq, Eigen::MatrixXd::Zero(4, 2), Eigen::Vector4d::Zero(), sq,
                                    Eigen::Vector4d(2, 0, 0, 0)),
               InvalidInput);
  EXPECT_THROW(reach::reach_support(seq, Eigen::MatrixXd::Zero(3, 2), Eigen::Vector4d::Zero(), sq,
                                    Eigen::Vector4d(1, 0, 0, 0)),
               InvalidInput);
  std::vector<Eigen::MatrixXd> none;
  EXPECT_THROW(reach::reach_support(none, Eigen::MatrixXd::Zero(4, 2), Eigen::Vector4d::Zero(), sq,
                                    Eigen::Vector4d(1, 0, 0, 0)),
               InvalidInput);
}

TEST(ReachSupportProperty, MonteCarloContainmentAndTightness) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> horizon(1, 5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2;
    const int dim = 4 * n;
    std::vector<Eigen::MatrixXd> seq;
    const int h = horizon(rng);
    for (int k = 0; k < h; ++k) {
      Eigen::MatrixXd K = random_matrix(rng, dim, dim);
      seq.push_back(0.9 * K / ncs::spectral_radius(K));
    }
    const Eigen::MatrixXd bsel = random_matrix(rng, dim, 2 * n);
    const Eigen::VectorXd x0 = random_matrix(rng, dim, 1);
    const auto omega = reach::circumscribe_ball(0.2, 3 + trial % 6, trial);
    const auto dirs = reach::uniform_directions(16);

    std::vector<reach::SupportResult> sup;
    for (int a = 0; a < n; ++a)
      for (const auto& d : dirs) sup.push_back(reach::reach_support(seq, bsel, x0, omega, reach::lift_direction(d, a, dim)));

    for (const auto& s : sup) {
      // the support point is reachable with the recorded inputs
      Eigen::VectorXd x = x0;
      for (int k = 0; k < h; ++k) x = seq[k] * x + bsel * s.inputs[k];
      EXPECT_LT((x - s.xstar).norm(), 1e-9);
    }
    for (int sample = 0; sample < 500; ++sample) {
      Eigen::VectorXd x = x0;
      for (int k = 0; k < h; ++k) {
        Eigen::VectorXd u(2 * n);
        for (int c = 0; c < n; ++c) u.segment<2>(2 * c) = sample_in(omega, rng);
        x = seq[k] * x + bsel * u;
      }
      std::size_t q = 0;
      for (int a = 0; a < n; ++a)
        for (const auto& d : dirs) EXPECT_LE(reach::lift_direction(d, a, dim).dot(x), sup[q++].gamma + 1e-9);
    }
  }
}

TEST(ReachSupportProperty, BudgetScalingIsMonotone) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Eigen::MatrixXd> seq(3, 0.3 * random_matrix(rng, 8, 8));
    const Eigen::MatrixXd bsel = random_matrix(rng, 8, 4);
    const Eigen::VectorXd x0 = random_matrix(rng, 8, 1);
    const auto omega = reach::circumscribe_ball(0.1, 8, trial);
    const Eigen::VectorXd dir = reach::lift_direction(Point(0.28, 0.96), trial % 2, 8);
    const double base = reach::reach_support(seq, bsel, x0, omega, dir).gamma;
    for (double alpha : {1.0, 1.5, 3.0})
      EXPECT_GE(reach::reach_support(seq, bsel, x0, omega.scaled(alpha), dir).gamma, base - 1e-12);
  }
}

TEST(AgentPolygon, UnitDiscGivesRegularOctagon) {
  const auto dirs = reach::uniform_directions(8);
  const std::vector<double> ones(8, 1.0);
  const auto poly = reach::agent_polygon(dirs, 0, ones);
  ASSERT_EQ(poly.vertices.size(), 8u);
  for (const auto& v : poly.vertices) EXPECT_NEAR(v.norm(), 1.0 / std::cos(std::numbers::pi / 8), 1e-12);
}

TEST(AgentPolygon, PointSetCollapses) {
  const int dim = 8;
  const Eigen::VectorXd x0 = (Eigen::VectorXd(dim) << 1, 0, 2, 0, -3, 1, 4, 1).finished();
  const auto dirs = reach::uniform_directions(16);
  const auto polys = reach::agent_polygons(Eigen::MatrixXd::Identity(dim, dim), 1, Eigen::MatrixXd::Zero(dim, 4), x0,
                                           reach::circumscribe_ball(0.1, 8), dirs);
  ASSERT_EQ(polys.size(), 2u);
  for (const auto& v : polys[1].vertices) EXPECT_LT((v - Point(-3, 4)).norm(), 1e-9);
}

TEST(AgentPolygon, NonSpanningDirectionsAreDegenerate) {
  const std::vector<Point> dirs{{1, 0}, {0, 1}, Point(1, 1).normalized()};
  const std::vector<double> sup{1, 1, 1};
  EXPECT_THROW(reach::agent_polygon(dirs, 0, sup), DegenerateGeometry);
}

TEST(AgentPolygon, MonteCarloEndpointsInside) {
  std::mt19937_64 rng(53);
  const int dim = 8;
  Eigen::MatrixXd K = random_matrix(rng, dim, dim);
  K = 0.9 * K / ncs::spectral_radius(K);
  const Eigen::MatrixXd bsel = random_matrix(rng, dim, 4);
  const Eigen::VectorXd x0 = random_matrix(rng, dim, 1);
  const auto omega = reach::circumscribe_ball(0.3, 8, 1);
  const auto dirs = reach::uniform_directions(16);
  const auto polys = reach::agent_polygons(K, 3, bsel, x0, omega, dirs);
  for (int s = 0; s < 2000; ++s) {
    Eigen::VectorXd x = x0;
    for (int k = 0; k < 3; ++k) {
      Eigen::VectorXd u(4);
      u << sample_in(omega, rng), sample_in(omega, rng);
      x = K * x + bsel * u;
    }
    for (int a = 0; a < 2; ++a)
      EXPECT_TRUE(reach::convex_contains(polys[a].vertices, Point(x(4 * a), x(4 * a + 2)), 1e-9));
  }
}

TEST(PolygonDistance, SquaresAndOverlap) {
  const auto dirs = reach::uniform_directions(4);
  const auto a = reach::agent_polygon(dirs, 0, std::vector<double>{0.5, 0.5, 0.5, 0.5});
  const auto b = reach::agent_polygon(dirs, 1, std::vector<double>{3.5, 0.5, -2.5, 0.5});
  const auto c = reach::agent_polygon(dirs, 2, std::vector<double>{1.0, 0.5, 0.0, 0.5});
  EXPECT_NEAR(reach::polygon_distance(a, b), 2.0, 1e-12);
  EXPECT_EQ(reach::polygon_distance(a, c), 0.0);
}
