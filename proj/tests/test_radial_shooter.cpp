#include <cmath>
#include <variant>

#include <gtest/gtest.h>

#include "cknlab/closed_forms.hpp"
#include "cknlab/radial_shooter.hpp"
#include "oracles.hpp"

using namespace cknlab;

namespace {

// First zeros of v(0)=1 solutions, frozen from oracle::rk4_first_zero (h = 1e-4).
constexpr double kLaneEmdenIndex3Zero = 6.896848619;
constexpr double kWeighted306Zero = 6.260258073;

double crossing(const ShotOutcome& outcome) {
  const auto* c = std::get_if<CrossedZero>(&outcome);
  return c ? c->r0 : NAN;
}

RadialTrajectory synthetic(const ProblemParams& params, double r_lo, double r_hi, int n,
                           auto&& v_of, auto&& dv_of) {
  RadialTrajectory traj;
  traj.params = params;
  traj.config.r_max = r_hi;
  for (int i = 0; i < n; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (n - 1));
    traj.nodes.push_back({r, v_of(r), dv_of(r)});
  }
  return traj;
}

}  // namespace

TEST(Oracle, FrozenZerosReproduce) {
  EXPECT_NEAR(oracle::rk4_first_zero(3, 0, 0, 3), kLaneEmdenIndex3Zero, 2e-9);
  EXPECT_NEAR(oracle::rk4_first_zero(3, 0, 2, 6), kWeighted306Zero, 2e-9);
}

TEST(SeriesStart, CoefficientsAtCriticalLaneEmden) {
  ShootConfig config;
  config.epsilon0 = 1e-3;
  const auto start = series_start({3, 0, 0, 5}, config);
  EXPECT_EQ(start.r, 1e-3);
  EXPECT_NEAR(start.v, 1 - 1e-6 / 6, 1e-15);
  EXPECT_NEAR(start.dv, -1e-3 / 3, 1e-15);
}

TEST(SeriesStart, SmallSigmaStaysFinite) {
  ShootConfig config;
  config.epsilon0 = 1e-3;
  const auto start = series_start({3, 0, -1.5, 2}, config);
  EXPECT_TRUE(std::isfinite(start.v));
  EXPECT_TRUE(std::isfinite(start.dv));
  EXPECT_LT(start.dv, 0.0);
}

TEST(SeriesStart, ShrinksUntilTruncationIsSmall) {
  ShootConfig config;
  config.epsilon0 = 0.5;
  config.rel_tol = 1e-12;
  const auto start = series_start({3, 0, 0, 5}, config);
  EXPECT_LT(start.r, 0.5);
  EXPECT_LE(start.truncation_estimate, 1e-12);
}

TEST(SeriesStart, InvalidInputs) {
  ShootConfig bad;
  bad.beta = -1;
  EXPECT_THROW(series_start({3, 0, 0, 5}, bad), Error);
  EXPECT_THROW(series_start({3, 0, -3.5, 5}, ShootConfig{}), Error);
}

TEST(Shoot, LaneEmdenIndex3) {
  const auto traj = shoot({3, 0, 0, 3}, ShootConfig{});
  EXPECT_NEAR(crossing(traj.outcome), kLaneEmdenIndex3Zero, 1e-7);
  EXPECT_EQ(traj.nodes.back().v, 0.0);
}

TEST(Shoot, WeightedSubcritical) {
  const auto traj = shoot({3, 0, 2, 6}, ShootConfig{});
  EXPECT_NEAR(crossing(traj.outcome), kWeighted306Zero, 1e-7);
}

TEST(Shoot, CriticalMatchesBubble) {
  ShootConfig config;
  config.r_max = 10;
  const auto traj = shoot({3, 0, 0, 5}, config);
  for (const auto& node : traj.nodes) {
    const double exact = 1 / std::sqrt(1 + node.r * node.r / 3);
    EXPECT_NEAR(node.v / exact, 1.0, 1e-6);
  }
}

TEST(Shoot, CriticalIsPositiveGlobalWithDecayOne) {
  const auto traj = shoot({3, 0, 0, 5}, ShootConfig{});
  const auto* g = std::get_if<PositiveGlobal>(&traj.outcome);
  ASSERT_NE(g, nullptr) << outcome_name(traj.outcome);
  EXPECT_NEAR(g->decay_exponent_estimate, 1.0, 1e-3);
}

TEST(Shoot, SupercriticalApproachesSingularSlope) {
  // Re mu = -0.1 at p = 6: the spiral into the singular solution is slow.
  ShootConfig config;
  config.r_max = 1e8;
  EXPECT_FALSE(shows_crossing_behavior(shoot({3, 0, 0, 6}, config).outcome));
  config.r_max = 1e15;
  const auto traj = shoot({3, 0, 0, 6}, config);
  const auto* s = std::get_if<ConvergedToSingular>(&traj.outcome);
  ASSERT_NE(s, nullptr) << outcome_name(traj.outcome);
  EXPECT_GT(s->oscillation_count, 0);
  const auto& tail = traj.nodes.back();
  EXPECT_NEAR(-tail.r * tail.dv / tail.v, 0.4, 0.02);
}

TEST(Shoot, ScalingLaw) {
  // v_beta(r) = beta v_1(beta^{(p-1)/sigma} r), so r0 scales by beta^{-(p-1)/sigma}.
  ShootConfig config;
  config.beta = 0.5;
  const auto traj = shoot({3, 0, 0, 3}, config);
  EXPECT_NEAR(crossing(traj.outcome), kLaneEmdenIndex3Zero * 2.0, 1e-6);
}

TEST(Shoot, Deterministic) {
  const auto a = shoot({4, 0.5, 0.2, 2.9}, ShootConfig{});
  const auto b = shoot({4, 0.5, 0.2, 2.9}, ShootConfig{});
  ASSERT_EQ(a.nodes.size(), b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) EXPECT_EQ(a.nodes[i].v, b.nodes[i].v);
}

TEST(Shoot, BeyondHorizonZeroIsFlagged) {
  // The zero for p = 4.99 sits near r = 1758; at r_max = 1000 the run is
  // already steeper than any positive entire solution allows.
  ShootConfig config;
  config.r_max = 1e3;
  const auto traj = shoot({3, 0, 0, 4.99}, config);
  const auto* inc = std::get_if<Inconclusive>(&traj.outcome);
  ASSERT_NE(inc, nullptr) << outcome_name(traj.outcome);
  EXPECT_EQ(inc->kind, InconclusiveReason::SteeperThanEntireBound);
  EXPECT_TRUE(shows_crossing_behavior(traj.outcome));

  config.r_max = 1e4;
  EXPECT_NEAR(crossing(shoot({3, 0, 0, 4.99}, config).outcome), 1758.2, 1.0);
}

TEST(Shoot, SpuriousCriticalZeroIsRefinedAway) {
  // At p_c with N-2+a = 4 a single 1e-10 shot drifts across zero near r = 2500.
  ShootConfig config;
  config.verify_events = false;
  EXPECT_TRUE(shows_crossing_behavior(shoot({5, 1, 2, 2.5}, config).outcome));

  const auto verified = shoot({5, 1, 2, 2.5}, ShootConfig{});
  EXPECT_TRUE(std::holds_alternative<PositiveGlobal>(verified.outcome)) << outcome_name(verified.outcome);
  EXPECT_LT(verified.config.rel_tol, 1e-10);
}

TEST(Shoot, GenuineZeroKeepsRequestedTolerance) {
  const auto traj = shoot({5, 1, 2, 2.49}, ShootConfig{});
  EXPECT_TRUE(std::holds_alternative<CrossedZero>(traj.outcome));
  EXPECT_EQ(traj.config.rel_tol, 1e-10);
}

TEST(ClassifyTrajectory, SyntheticBubble) {
  const auto traj = synthetic(
      {3, 0, 0, 5}, 1e-3, 1e4, 400, [](double r) { return 1 / std::sqrt(1 + r * r / 3); },
      [](double r) { return -r / 3 * std::pow(1 + r * r / 3, -1.5); });
  const auto outcome = classify_trajectory(traj);
  const auto* g = std::get_if<PositiveGlobal>(&outcome);
  ASSERT_NE(g, nullptr);
  EXPECT_NEAR(g->decay_exponent_estimate, 1.0, 1e-4);
}

TEST(ClassifyTrajectory, SyntheticPowerTail) {
  const auto traj = synthetic(
      {3, 0, 0, 5}, 1e-3, 1e4, 400, [](double r) { return 1 / std::sqrt(r); },
      [](double r) { return -0.5 * std::pow(r, -1.5); });
  const auto outcome = classify_trajectory(traj);
  const auto* g = std::get_if<PositiveGlobal>(&outcome);
  ASSERT_NE(g, nullptr);
  EXPECT_NEAR(g->decay_exponent_estimate, 0.5, 1e-10);
}

TEST(ClassifyTrajectory, SingularTailConverges) {
  const ProblemParams params{3, 0, 0, 7};
  const auto traj = synthetic(
      params, 1e-3, 1e4, 400, [&](double r) { return singular_eval(params, r); },
      [&](double r) { return singular_jet(params, r).dv; });
  EXPECT_TRUE(std::holds_alternative<ConvergedToSingular>(classify_trajectory(traj)));
}

TEST(ClassifyTrajectory, ShortWindowIsInconclusive) {
  auto traj = synthetic(
      {3, 0, 0, 5}, 1e-3, 2.0, 50, [](double r) { return 1 / std::sqrt(1 + r * r / 3); },
      [](double r) { return -r / 3 * std::pow(1 + r * r / 3, -1.5); });
  EXPECT_TRUE(std::holds_alternative<Inconclusive>(classify_trajectory(traj)));
}

TEST(Threshold, RecoversCriticalExponents) {
  ShootConfig config;
  config.r_max = 1e3;
  EXPECT_NEAR(threshold_bisect(3, 0, 0, 4, 6, 1e-3, config).p_star, 5, 1e-2);
  EXPECT_NEAR(threshold_bisect(4, 0, 0, 2.5, 3.5, 1e-3, config).p_star, 3, 1e-2);
  EXPECT_NEAR(threshold_bisect(3, 0, 1, 6, 8, 1e-3, config).p_star, 7, 1e-2);
}

TEST(Threshold, RecordsEveryProbe) {
  const auto result = threshold_bisect(3, 0, 0, 4, 6, 1e-2);
  EXPECT_GE(result.probes.size(), 9u);
  EXPECT_TRUE(result.probes.front().crossing);
  EXPECT_FALSE(result.probes[1].crossing);
  EXPECT_LT(result.p_hi - result.p_lo, 1e-2);
}

TEST(Threshold, BadBracket) {
  EXPECT_THROW(threshold_bisect(3, 0, 0, 5.5, 6, 1e-2), Error);
  EXPECT_THROW(threshold_bisect(3, 0, 0, 6, 4, 1e-2), Error);
  EXPECT_THROW(threshold_bisect(3, 0, 0, 2, 6, 1e-2), Error);
}
