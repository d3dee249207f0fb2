#include <cmath>

#include <gtest/gtest.h>

#include "cknlab/closed_forms.hpp"
#include "cknlab/emden_fowler.hpp"

using namespace cknlab;

TEST(ToCylinder, SingularSolutionIsFixedPoint) {
  const ProblemParams params{3, 0, 0, 7};
  RadialTrajectory traj;
  traj.params = params;
  for (double r : {0.01, 0.5, 3.0, 1e3}) {
    const auto jet = singular_jet(params, r);
    traj.nodes.push_back({r, jet.v, jet.dv});
  }
  const double w_star = std::pow(derive(params).lambda2, 1.0 / (params.p - 1));
  for (const auto& node : to_cylinder(traj).nodes) {
    EXPECT_NEAR(node.w, w_star, 1e-14);
    EXPECT_NEAR(node.dw, 0.0, 1e-14);
  }
}

TEST(ToCylinder, NormalizedBubbleLimits) {
  // w(t) = e^{t/2} (1 + e^{2t}/3)^{-1/2} tends to 0 at both ends; r v(r) -> sqrt(3).
  const ProblemParams params{3, 0, 0, 5};
  const auto bubble = normalized_bubble<double>(params);
  RadialTrajectory traj;
  traj.params = params;
  for (double r : {1e-8, 1.0, 1e8}) {
    const auto value = bubble_eval(bubble, r);
    traj.nodes.push_back({r, value.v, value.dv});
  }
  const auto cyl = to_cylinder(traj);
  EXPECT_NEAR(cyl.nodes[0].w, 1e-4, 1e-9);
  EXPECT_NEAR(cyl.nodes[1].w, std::sqrt(0.75), 1e-14);
  EXPECT_NEAR(cyl.nodes[2].w, std::sqrt(3.0) * 1e-4, 1e-9);
  EXPECT_NEAR(traj.nodes[2].r * traj.nodes[2].v, std::sqrt(3.0), 1e-8);
}

TEST(ToCylinder, DropsTerminalZeroAndRejectsNegative) {
  const auto traj = shoot({3, 0, 0, 3}, ShootConfig{});
  ASSERT_EQ(traj.nodes.back().v, 0.0);
  EXPECT_EQ(to_cylinder(traj).nodes.size(), traj.nodes.size() - 1);

  RadialTrajectory bad;
  bad.params = {3, 0, 0, 3};
  bad.nodes = {{1.0, 1.0, 0.0}, {2.0, -0.1, -1.0}, {3.0, 0.5, 0.0}};
  EXPECT_THROW(to_cylinder(bad), Error);
}

TEST(Rhs, Examples) {
  const ProblemParams params{3, 0, 0, 5};
  const double w_star = std::pow(0.25, 0.25);
  EXPECT_NEAR(rhs(params, w_star, 0).second, 0.0, 1e-15);
  EXPECT_EQ(rhs(params, 0, 0).second, 0.0);
  EXPECT_DOUBLE_EQ(rhs(params, 1, 0).second, -0.75);
}

TEST(FixedPoints, CriticalIsCenter) {
  const auto rep = fixed_points({3, 0, 0, 5});
  EXPECT_EQ(rep.kind, FixedPointKind::Center);
  EXPECT_NEAR(rep.mu1.real(), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(rep.mu1.imag()), 1.0, 1e-15);
  EXPECT_FALSE(rep.positive_real_part);
}

TEST(FixedPoints, SupercriticalStableSpiral) {
  const auto rep = fixed_points({3, 0, 0, 6});
  EXPECT_EQ(rep.kind, FixedPointKind::StableSpiral);
  EXPECT_NEAR(rep.mu1.real(), -0.1, 1e-14);
  EXPECT_NEAR(rep.discriminant, 0.04 - 4 * 5 * 0.24, 1e-14);
}

TEST(FixedPoints, SubcriticalHasPositiveRealPart) {
  for (double p : {3.2, 4.0, 4.9}) {
    const auto rep = fixed_points({3, 0, 0, p});
    EXPECT_TRUE(rep.positive_real_part) << p;
    EXPECT_NEAR(rep.mu1.real() + rep.mu2.real(), -derive({3, 0, 0, p}).lambda1, 1e-14);
  }
}

TEST(FixedPoints, AgreesWithSingularAmplitude) {
  for (const ProblemParams& params : {ProblemParams{3, 0, 0, 6}, {4, 0.5, 1, 3.7}, {5, 1, 2, 2.2}}) {
    EXPECT_NEAR(fixed_points(params).w_star, singular_amplitude(params), 1e-12);
  }
}

TEST(FixedPoints, OutsideRange) { EXPECT_THROW(fixed_points({3, 0, 0, 2}), Error); }

TEST(Hamiltonian, Examples) {
  const ProblemParams params{3, 0, 0, 5};
  EXPECT_EQ(hamiltonian(params, 0, 0).value, 0.0);
  const double w_star = std::pow(0.25, 0.25);
  EXPECT_NEAR(hamiltonian(params, w_star, 0).value, -0.0625 + 0.125 / 6, 1e-15);
  EXPECT_TRUE(hamiltonian(params, 0, 0).conserved);
  EXPECT_FALSE(hamiltonian({3, 0, 0, 4}, 0, 0).conserved);
}

TEST(Hamiltonian, VanishesOnBubbleNodes) {
  const ProblemParams params{4, 0.5, 1, critical_exponent(4, 0.5, 1)};
  const auto bubble = make_bubble<double>(params, 3.0);
  const double gamma = derive(params).gamma;
  for (double r : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
    const auto value = bubble_eval(bubble, r);
    const auto node = to_cylinder_node(gamma, {r, value.v, value.dv});
    EXPECT_NEAR(hamiltonian(params, node.w, node.dw).value, 0.0, 1e-13) << r;
  }
}

TEST(Hamiltonian, DissipationRateOffCriticality) {
  // dH/dt = -Lambda1 (w')^2 along the cylinder flow.
  const ProblemParams params{3, 0, 0, 6};
  const auto cyl = integrate_cylinder(params, 0.0, 0.3, 0.1, 2.0, 1e-12, 1e-14);
  const double lambda1 = derive(params).lambda1;
  for (std::size_t i = 1; i + 1 < cyl.nodes.size(); ++i) {
    const auto& a = cyl.nodes[i - 1];
    const auto& b = cyl.nodes[i + 1];
    const auto& m = cyl.nodes[i];
    const double dH = (hamiltonian(params, b.w, b.dw).value - hamiltonian(params, a.w, a.dw).value) /
                      (b.t - a.t);
    EXPECT_NEAR(dH, -lambda1 * m.dw * m.dw, 2e-3);
  }
}

TEST(IntegrateCylinder, CriticalFlowConservesH) {
  const ProblemParams params{3, 0, 0, 5};
  const auto cyl = integrate_cylinder(params, 0.0, 0.5, 0.0, 30.0, 1e-12, 1e-14);
  const double h0 = hamiltonian(params, 0.5, 0.0).value;
  for (const auto& node : cyl.nodes) EXPECT_NEAR(hamiltonian(params, node.w, node.dw).value, h0, 1e-10);
}
