#pragma once

/// \file pohozaev.hpp
/// Both sides of the Rellich-Pohozaev identity on B_R for radial data:
///
///   ((N+b)/(p+1) - (N-2+a)/2) * w_{N-1} int_0^R r^{N-1+b} v^{p+1} dr
///     = (N-2+a)/2 * |dB_R| R^a v v'            (boundary_1)
///     + |dB_R| R^{b+1} v^{p+1} / (p+1)         (boundary_2)
///     + |dB_R| R^{a+1} (v')^2 / 2              (boundary_3)
///
/// with |dB_R| = w_{N-1} R^{N-1}. Holds for every solution, so the residual
/// measures numerical error on trajectories and fails for non-solutions.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cknlab/core_params.hpp"
#include "cknlab/radial_shooter.hpp"

namespace cknlab {

/// Area of the unit sphere S^{N-1}.
inline double sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

struct PohozaevReport {
  double R = 0;
  double sphere_area = 0;
  double interior_coeff = 0;
  double interior_integral = 0;
  double boundary_1 = 0;
  double boundary_2 = 0;
  double boundary_3 = 0;
  double residual = 0;
  double relative_residual = 0;
  /// |quintic - cubic| interpolant of v at R, relative to v(R).
  double interpolation_error_estimate = 0;
};

inline constexpr double kPohozaevFloor = 1e-30;

/// (N+b)/(p+1) - (N-2+a)/2. Positive exactly when p < p_critical; Dirichlet
/// solutions on balls need it positive.
inline double ball_nonexistence_coeff(const ProblemParams& params) {
  validate(params);
  return (params.N + params.b) / (params.p + 1.0) - 0.5 * (params.N - 2 + params.a);
}

namespace detail {

/// Quintic Hermite data on [t0, t1] in t = ln r, with y = v, y' = r v' and y''
/// taken from the equation. The cubic built from (y, y') alone serves as the
/// error estimate.
struct HermiteSegment {
  double t0, t1, v0, v1, z0, z1, c0, c1;

  double h() const { return t1 - t0; }

  double value(double t) const {
    const double s = (t - t0) / h();
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double hh = h() * h();
    return (1 - 10 * s3 + 15 * s4 - 6 * s5) * v0 + (10 * s3 - 15 * s4 + 6 * s5) * v1 +
           (s - 6 * s3 + 8 * s4 - 3 * s5) * h() * z0 + (-4 * s3 + 7 * s4 - 3 * s5) * h() * z1 +
           0.5 * (s2 - 3 * s3 + 3 * s4 - s5) * hh * c0 + 0.5 * (s3 - 2 * s4 + s5) * hh * c1;
  }

  /// dv/dt = r v'
  double slope(double t) const {
    const double s = (t - t0) / h();
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    return (-30 * s2 + 60 * s3 - 30 * s4) * (v0 - v1) / h() +
           (1 - 18 * s2 + 32 * s3 - 15 * s4) * z0 + (-12 * s2 + 28 * s3 - 15 * s4) * z1 +
           0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4) * h() * c0 +
           0.5 * (3 * s2 - 8 * s3 + 5 * s4) * h() * c1;
  }

  double cubic(double t) const {
    const double s = (t - t0) / h();
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * v0 + (s3 - 2 * s2 + s) * h() * z0 + (-2 * s3 + 3 * s2) * v1 +
           (s3 - s2) * h() * z1;
  }
};

/// d(r v')/dt from the radial equation: (2-N-a) r v' - r^{2+b-a} |v|^{p-1} v.
inline double curvature(const ProblemParams& params, const RadialNode& node) {
  const double z = node.r * node.dv;
  return (2.0 - params.N - params.a) * z -
         std::pow(node.r, weight_gap(params.a, params.b)) * signed_pow(node.v, params.p);
}

inline HermiteSegment segment(const ProblemParams& params, const RadialNode& lo,
                              const RadialNode& hi) {
  return {std::log(lo.r),       std::log(hi.r),       lo.v,
          hi.v,                 lo.r * lo.dv,         hi.r * hi.dv,
          curvature(params, lo), curvature(params, hi)};
}

inline constexpr std::array<double, 6> kGaussX = {-0.9324695142031521, -0.6612093864662645,
                                                  -0.2386191860831969, 0.2386191860831969,
                                                  0.6612093864662645,  0.9324695142031521};
inline constexpr std::array<double, 6> kGaussW = {0.1713244923791704, 0.3607615730065964,
                                                  0.4679139345726910, 0.4679139345726910,
                                                  0.3607615730065964, 0.1713244923791704};

/// int_{t0}^{t1} e^{(N+b) t} |v(t)|^{p+1} dt on one Hermite segment.
inline double segment_integral(const HermiteSegment& seg, double t0, double t1, double weight_exp,
                               double q) {
  const double mid = 0.5 * (t0 + t1);
  const double half = 0.5 * (t1 - t0);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussX.size(); ++i) {
    const double t = mid + half * kGaussX[i];
    sum += kGaussW[i] * std::exp(weight_exp * t) * std::pow(std::abs(seg.value(t)), q);
  }
  return half * sum;
}

}  // namespace detail

/// Evaluates the identity on B_R from the stored nodes of a trajectory.
inline PohozaevReport evaluate(const RadialTrajectory& traj, double R) {
  const auto& params = traj.params;
  validate_superlinear(params);
  const auto [N, a, b, p] = params;
  const auto& all = traj.nodes;

  // Nodes at the origin carry no information the series piece does not.
  std::size_t first = 0;
  while (first < all.size() && all[first].r <= 0.0) ++first;
  if (all.size() - first < 2) throw Error(Errc::RangeExceeded, "trajectory has fewer than 2 nodes");
  const RadialNode& head = all[first];
  if (!(R >= head.r) || R > all.back().r * (1.0 + 1e-14)) {
    throw Error(Errc::RangeExceeded, "R lies outside the trajectory's radial range");
  }
  R = std::min(R, all.back().r);

  const double q = p + 1.0;
  const double weight_exp = N + b;
  const double sigma = weight_gap(a, b);

  // [0, r_first]: integrate the two-term series v = beta - A r^sigma matched to the first node.
  const double A = -head.dv * std::pow(head.r, 1.0 - sigma) / sigma;
  const double beta = head.v + A * std::pow(head.r, sigma);
  double integral = std::pow(beta, q) * std::pow(head.r, N + b) / (N + b) -
                    q * std::pow(beta, p) * A * std::pow(head.r, N + b + sigma) / (N + b + sigma);

  const double tR = std::log(R);
  double vR = head.v, dvR = head.dv, interp_err = 0.0;
  for (std::size_t i = first; i + 1 < all.size(); ++i) {
    const RadialNode& lo = all[i];
    const RadialNode& hi = all[i + 1];
    if (lo.r >= R) break;
    if (!(lo.v > 0.0)) throw Error(Errc::NonpositiveSolution, "v <= 0 inside B_R");
    const auto seg = detail::segment(params, lo, hi);
    const bool last = hi.r >= R;
    const double t_top = last ? tR : seg.t1;
    integral += detail::segment_integral(seg, seg.t0, t_top, weight_exp, q);
    if (last) {
      vR = seg.value(tR);
      dvR = seg.slope(tR) / R;
      interp_err = std::abs(vR - seg.cubic(tR)) / std::max(std::abs(vR), kPohozaevFloor);
    }
  }
  if (vR < 0.0) throw Error(Errc::NonpositiveSolution, "v(R) < 0");

  PohozaevReport rep;
  rep.R = R;
  rep.sphere_area = sphere_area(N);
  rep.interior_coeff = ball_nonexistence_coeff(params);
  rep.interior_integral = rep.sphere_area * integral;
  const double shell = rep.sphere_area * std::pow(R, N - 1);
  rep.boundary_1 = 0.5 * (N - 2 + a) * shell * std::pow(R, a) * vR * dvR;
  rep.boundary_2 = shell * std::pow(R, b + 1) * std::pow(vR, q) / q;
  rep.boundary_3 = shell * std::pow(R, a + 1) * dvR * dvR / 2.0;
  const double lhs = rep.interior_coeff * rep.interior_integral;
  rep.residual = lhs - (rep.boundary_1 + rep.boundary_2 + rep.boundary_3);
  const double scale =
      std::max({std::abs(lhs),
                std::abs(rep.boundary_1) + std::abs(rep.boundary_2) + std::abs(rep.boundary_3),
                kPohozaevFloor});
  rep.relative_residual = rep.residual / scale;
  rep.interpolation_error_estimate = interp_err;
  return rep;
}

}  // namespace cknlab
