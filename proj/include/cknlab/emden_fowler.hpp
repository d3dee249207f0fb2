#pragma once

/// \file emden_fowler.hpp
/// Cylinder variables for radial solutions: w(t) = r^gamma v(r), t = ln r,
/// gamma = (2+b-a)/(p-1). The radial equation becomes the autonomous system
///
///     w'' = -Lambda1 w' + Lambda2 w - w^p,
///
/// with Lambda1 = N-2+a-2 gamma and Lambda2 = gamma (N-2+a-gamma).
///
/// Orientation: the source form is  -w'' - Lambda1 w' + Lambda2 w = w^p  (radial
/// part), which rearranges to the line above. Lambda1 acts as friction: H below
/// obeys dH/dt = -Lambda1 (w')^2, so H is a first integral exactly when
/// Lambda1 = 0, i.e. at p = p_critical.

#include <cmath>
#include <complex>
#include <string_view>
#include <utility>
#include <vector>

#include "cknlab/core_params.hpp"
#include "cknlab/dormand_prince.hpp"
#include "cknlab/radial_shooter.hpp"

namespace cknlab {

struct CylinderNode {
  double t = 0;
  double w = 0;
  double dw = 0;
};

struct CylinderTrajectory {
  ProblemParams params;
  std::vector<CylinderNode> nodes;
};

/// Image of a radial state (r, v, v') in cylinder variables.
inline CylinderNode to_cylinder_node(double gamma, const RadialNode& node) {
  const double rg = std::pow(node.r, gamma);
  return {std::log(node.r), rg * node.v, rg * (gamma * node.v + node.r * node.dv)};
}

/// Node-wise transform of a radial trajectory. A terminal zero-crossing node
/// (v = 0 at the last node) is the boundary of the positive range and is dropped.
inline CylinderTrajectory to_cylinder(const RadialTrajectory& traj) {
  const auto d = derive(traj.params);
  CylinderTrajectory out;
  out.params = traj.params;
  out.nodes.reserve(traj.nodes.size());
  for (std::size_t i = 0; i < traj.nodes.size(); ++i) {
    const auto& node = traj.nodes[i];
    const bool terminal_zero = i + 1 == traj.nodes.size() && i > 0 && node.v == 0.0;
    if (terminal_zero) break;
    if (!(node.r > 0.0) || !(node.v > 0.0)) {
      throw Error(Errc::NonpositiveNode, "to_cylinder needs r > 0 and v > 0 at every node");
    }
    out.nodes.push_back(to_cylinder_node(d.gamma, node));
  }
  return out;
}

/// (w', w'') of the radial cylinder system. w^p is extended oddly for w < 0.
inline std::pair<double, double> rhs(const ProblemParams& params, double w, double dw) {
  const auto d = derive(params);
  return {dw, -d.lambda1 * dw + d.lambda2 * w - detail::signed_pow(w, params.p)};
}

enum class FixedPointKind {
  Center,
  StableSpiral,
  StableNode,
  UnstableSpiral,
  UnstableNode,
  Saddle,
  Degenerate,
};

constexpr std::string_view to_string(FixedPointKind kind) noexcept {
  switch (kind) {
    case FixedPointKind::Center: return "center";
    case FixedPointKind::StableSpiral: return "stable_spiral";
    case FixedPointKind::StableNode: return "stable_node";
    case FixedPointKind::UnstableSpiral: return "unstable_spiral";
    case FixedPointKind::UnstableNode: return "unstable_node";
    case FixedPointKind::Saddle: return "saddle";
    case FixedPointKind::Degenerate: return "degenerate";
  }
  return "unknown";
}

struct FixedPointReport {
  double w_star = 0;
  std::complex<double> mu1;
  std::complex<double> mu2;
  FixedPointKind kind = FixedPointKind::Degenerate;
  bool positive_real_part = false;
  double discriminant = 0;
};

/// Discriminants smaller than this in magnitude are reported as Degenerate.
inline constexpr double kDegenerateDiscriminant = 1e-10;

/// The positive equilibrium (w_star, 0) and the roots of mu^2 + Lambda1 mu + (p-1) Lambda2.
inline FixedPointReport fixed_points(const ProblemParams& params) {
  validate_superlinear(params);
  if (!(params.p > serrin_exponent(params.N, params.a, params.b)) ||
      !(weight_gap(params.a, params.b) > 0.0)) {
    throw Error(Errc::NotInRange, "fixed point needs p > p_serrin and b > a - 2");
  }
  const auto d = derive(params);
  const double c = (params.p - 1.0) * d.lambda2;
  FixedPointReport rep;
  rep.w_star = std::pow(d.lambda2, 1.0 / (params.p - 1.0));
  rep.discriminant = d.lambda1 * d.lambda1 - 4.0 * c;
  const std::complex<double> root = std::sqrt(std::complex<double>(rep.discriminant, 0.0));
  rep.mu1 = 0.5 * (-d.lambda1 + root);
  rep.mu2 = 0.5 * (-d.lambda1 - root);
  rep.positive_real_part = std::max(rep.mu1.real(), rep.mu2.real()) > 0.0;

  if (c < 0.0) {
    rep.kind = FixedPointKind::Saddle;
  } else if (std::abs(rep.discriminant) < kDegenerateDiscriminant) {
    rep.kind = FixedPointKind::Degenerate;
  } else if (is_critical(params)) {
    rep.kind = FixedPointKind::Center;
    rep.positive_real_part = false;
  } else if (rep.discriminant < 0.0) {
    rep.kind = d.lambda1 > 0.0 ? FixedPointKind::StableSpiral : FixedPointKind::UnstableSpiral;
  } else {
    rep.kind = d.lambda1 > 0.0 ? FixedPointKind::StableNode : FixedPointKind::UnstableNode;
  }
  return rep;
}

struct HamiltonianValue {
  double value = 0;
  /// False off criticality, where H drifts at rate -Lambda1 (w')^2.
  bool conserved = false;
};

/// H = (w')^2/2 - Lambda2 w^2/2 + |w|^{p+1}/(p+1).
inline HamiltonianValue hamiltonian(const ProblemParams& params, double w, double dw) {
  const auto d = derive(params);
  const double q = params.p + 1.0;
  return {0.5 * dw * dw - 0.5 * d.lambda2 * w * w + std::pow(std::abs(w), q) / q,
          is_critical(params)};
}

/// Integrates the cylinder system from (t0, w0, dw0) to t1.
inline CylinderTrajectory integrate_cylinder(const ProblemParams& params, double t0, double w0,
                                             double dw0, double t1, double rel_tol = 1e-10,
                                             double abs_tol = 1e-12) {
  const auto d = derive(params);
  const double p = params.p;
  CylinderTrajectory out;
  out.params = params;
  out.nodes.push_back({t0, w0, dw0});
  const auto f = [&](double, const ode::State<2>& y) -> ode::State<2> {
    return {y[1], -d.lambda1 * y[1] + d.lambda2 * y[0] - detail::signed_pow(y[0], p)};
  };
  ode::StepperOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = abs_tol;
  ode::integrate<2>(f, t0, {w0, dw0}, t1, opt, [&](const ode::DenseStep<2>& step) {
    out.nodes.push_back({step.t1, step.y1[0], step.y1[1]});
    return true;
  });
  return out;
}

}  // namespace cknlab
