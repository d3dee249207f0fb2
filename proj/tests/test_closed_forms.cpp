#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "cknlab/closed_forms.hpp"
#include "oracles.hpp"

using namespace cknlab;

TEST(BubbleAmplitude, Examples) {
  EXPECT_NEAR(bubble_amplitude({3, 0, 0, 5}), std::pow(3.0, 0.25), 1e-14);
  EXPECT_NEAR(bubble_amplitude({4, 0, 0, 3}), std::sqrt(8.0), 1e-14);
  EXPECT_NEAR(bubble_amplitude({3, 0, 1, 7}), std::pow(4.0, 1.0 / 6), 1e-14);
}

TEST(BubbleAmplitude, SubstitutionOracle) {
  // Finite-difference defect of A (1 + r^sigma)^{-m}, written out independently.
  const std::tuple<int, double, double> triples[] = {{3, 0, 0}, {4, 0, 0}, {3, 0, 1}, {3, 0.5, 1}, {5, 1, 2}};
  for (const auto& [N, a, b] : triples) {
    const double A = bubble_amplitude({N, a, b, critical_exponent(N, a, b)});
    for (double r : {0.5, 1.0, 2.0}) {
      EXPECT_LT(std::abs(oracle::bubble_fd_residual(N, a, b, A, r)), 1e-7) << N << a << b << ' ' << r;
    }
  }
}

TEST(BubbleAmplitude, RequiresCriticality) {
  EXPECT_THROW(bubble_amplitude({3, 0, 0, 4}), Error);
}

TEST(BubbleEval, Origin) {
  const auto bubble = make_bubble<double>({3, 0, 0, 5});
  const auto value = bubble_eval(bubble, 0.0);
  EXPECT_NEAR(value.v, std::pow(3.0, 0.25), 1e-14);
  EXPECT_EQ(value.dv, 0.0);
}

TEST(BubbleEval, NormalizedProfile) {
  const auto bubble = normalized_bubble<double>({3, 0, 0, 5});
  EXPECT_NEAR(bubble_eval(bubble, 0.0).v, 1.0, 1e-14);
  EXPECT_NEAR(bubble_eval(bubble, std::sqrt(3.0)).v, std::sqrt(0.5), 1e-14);
  for (double r : {0.1, 1.0, 7.0, 300.0}) {
    EXPECT_NEAR(bubble_eval(bubble, r).v, 1.0 / std::sqrt(1 + r * r / 3), 1e-14);
  }
}

TEST(BubbleEval, DecayRate) {
  const auto bubble = make_bubble<double>({4, 0.5, 1, critical_exponent(4, 0.5, 1)});
  const double k = 4 - 2 + 0.5;
  const double l1 = bubble_eval(bubble, 1e6).v * std::pow(1e6, k);
  const double l2 = bubble_eval(bubble, 1e9).v * std::pow(1e9, k);
  EXPECT_GT(l1, 0.0);
  EXPECT_NEAR(l1 / l2, 1.0, 1e-8);
}

TEST(BubbleEval, DerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> logr(-3, 3);
  const auto bubble = make_bubble<double>({3, 0.5, 1, critical_exponent(3, 0.5, 1)}, 2.5);
  for (int i = 0; i < 50; ++i) {
    const double r = std::pow(10.0, logr(rng));
    const double h = 1e-6 * r;
    const double fd = (bubble_eval(bubble, r + h).v - bubble_eval(bubble, r - h).v) / (2 * h);
    // Cancellation in the difference costs about eps |v| / h.
    const double roundoff = 4 * std::numeric_limits<double>::epsilon() * bubble_eval(bubble, r).v / h;
    EXPECT_NEAR(bubble_eval(bubble, r).dv, fd, 1e-8 * std::abs(fd) + roundoff);
  }
}

TEST(BubbleEval, SmallSigmaOrigin) {
  // sigma = 0.5: v'(0) is infinite.
  const int N = 3;
  const double a = 0, b = -1.5;
  const auto bubble = make_bubble<double>({N, a, b, critical_exponent(N, a, b)});
  EXPECT_THROW(bubble_eval(bubble, 0.0), Error);
  EXPECT_NO_THROW(bubble_eval(bubble, 1e-3));
}

TEST(Singular, Examples) {
  EXPECT_NEAR(singular_eval({3, 0, 0, 5}, 1.0), std::pow(0.25, 0.25), 1e-14);
  EXPECT_NEAR(singular_eval({3, 0, 0, 5}, 4.0), std::pow(0.25, 0.25) / 2, 1e-14);
  try {
    singular_eval({3, 0, 0, 2}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotInSerrinSupercriticalRange);
  }
}

TEST(Singular, PowerLawIsExact) {
  const ProblemParams params{4, 0.3, 0.7, 4.5};
  const double gamma = weight_gap(params.a, params.b) / (params.p - 1);
  const double c = singular_eval(params, 1.0);
  for (double r : {1e-3, 0.2, 50.0, 1e4}) {
    EXPECT_NEAR(singular_eval(params, r) * std::pow(r, gamma) / c, 1.0, 1e-13);
  }
}

TEST(Residual, Examples) {
  const ProblemParams params{3, 0, 0, 5};
  const auto bubble = make_bubble<double>(params);
  const auto jet = bubble_jet(bubble, 1.0);
  EXPECT_NEAR(residual(params, jet.v, jet.dv, jet.ddv, 1.0), 0.0, 1e-12);
  const auto s = singular_jet(params, 2.0);
  EXPECT_NEAR(residual(params, s.v, s.dv, s.ddv, 2.0), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(residual(params, 1.0, 0.0, 0.0, 1.0), 1.0);
}

TEST(Residual, BubbleFamilyInQuadPrecision) {
  const std::tuple<int, double, double> triples[] = {{3, 0, 0},   {3, 0, 1},  {3, 0.5, 1},
                                                     {4, 0, 0},   {4, -0.5, 0}, {5, 1, 2}};
  for (const auto& [N, a, b] : triples) {
    const ProblemParams params{N, a, b, critical_exponent(N, a, b)};
    for (double lambda : {1e-2, 1.0, 1e2}) {
      EXPECT_LT(max_bubble_residual(params, 100, 1e-3, 1e3, lambda), 1e-10) << N << a << b;
    }
  }
}

TEST(Residual, OffCriticalBubbleFails) {
  // The critical profile fed to a subcritical equation leaves an O(1) defect.
  const ProblemParams crit{3, 0, 0, 5};
  const auto bubble = make_bubble<double>(crit);
  const auto jet = bubble_jet(bubble, 5.0);
  EXPECT_GT(std::abs(relative_residual(ProblemParams{3, 0, 0, 4}, jet.v, jet.dv, jet.ddv, 5.0)), 0.1);
}
