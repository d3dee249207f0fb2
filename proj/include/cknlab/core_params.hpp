#pragma once

/// \file core_params.hpp
/// Parameter validation, derived exponents and the regime classifier for the
/// weighted equation  div(|x|^a Du) + |x|^b u^p = 0  in R^N.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "cknlab/error.hpp"

namespace cknlab {

/// The quadruple (N, a, b, p). N is the dimension, a weights the gradient,
/// b weights the source and p is the nonlinearity exponent.
struct ProblemParams {
  int N = 3;
  double a = 0.0;
  double b = 0.0;
  double p = 2.0;

  friend bool operator==(const ProblemParams&, const ProblemParams&) = default;
};

/// Relative tolerance on |p - p_critical| / p_critical for "p is critical".
inline constexpr double kCriticalRelTol = 1e-12;

/// Tolerance on the balance (N+b)/q + 1 = (N+a)/2, relative to max(1, (N+a)/2).
inline constexpr double kBalanceTol = 1e-10;

inline ProblemParams validate(const ProblemParams& params) {
  if (params.N < 3) {
    throw Error(Errc::DimensionTooSmall, "N = " + std::to_string(params.N) + " < 3");
  }
  if (!(params.N - 2 + params.a > 0.0)) {
    throw Error(Errc::DegenerateWeight, "N - 2 + a must be positive");
  }
  return params;
}

/// validate() plus p > 1, the requirement of every solver-facing operation.
inline ProblemParams validate_superlinear(const ProblemParams& params) {
  validate(params);
  if (!(params.p > 1.0) || !std::isfinite(params.p)) {
    throw Error(Errc::InvalidExponent, "p must be a finite number > 1");
  }
  return params;
}

// Thresholds that depend only on (N, a, b).

/// 2 + b - a, the gap between the two weights.
inline double weight_gap(double a, double b) { return 2.0 + b - a; }

inline double serrin_exponent(int N, double a, double b) { return (N + b) / (N - 2 + a); }

inline double critical_exponent(int N, double a, double b) {
  return (N + 2 + 2 * b - a) / (N - 2 + a);
}

/// beta_FS(a) = ((N-2+a)/2) (1 - N [(N-2+a)^2 + 4(N-1)]^{-1/2}); the raw curve,
/// meaningful only for a > 0.
inline double beta_fs(int N, double a) {
  const double k = N - 2 + a;
  return 0.5 * k * (1.0 - N / std::sqrt(k * k + 4.0 * (N - 1)));
}

inline bool is_critical(const ProblemParams& params) {
  const double pc = critical_exponent(params.N, params.a, params.b);
  return std::abs(params.p - pc) <= kCriticalRelTol * std::abs(pc);
}

struct DerivedExponents {
  double sigma = 0;
  double p_serrin = 0;
  double p_critical = 0;
  double gamma = 0;
  double lambda1 = 0;
  double lambda2 = 0;
  std::optional<double> fs_b_threshold;  // only for a > 0
};

inline DerivedExponents derive(const ProblemParams& params) {
  validate_superlinear(params);
  const auto [N, a, b, p] = params;
  DerivedExponents d;
  d.sigma = weight_gap(a, b);
  d.p_serrin = serrin_exponent(N, a, b);
  d.p_critical = critical_exponent(N, a, b);
  d.gamma = d.sigma / (p - 1.0);
  d.lambda1 = N - 2 + a - 2.0 * d.gamma;
  d.lambda2 = d.gamma * (N - 2 + a - d.gamma);
  if (a > 0.0) d.fs_b_threshold = (p + 1.0) * beta_fs(N, a);
  return d;
}

enum class RegimeKind {
  InadmissibleWeights,
  NoPositiveSolutionSerrin,
  SubcriticalLiouville,
  Critical,
  Supercritical,
};

constexpr std::string_view to_string(RegimeKind kind) noexcept {
  switch (kind) {
    case RegimeKind::InadmissibleWeights: return "inadmissible_weights";
    case RegimeKind::NoPositiveSolutionSerrin: return "no_positive_solution_serrin";
    case RegimeKind::SubcriticalLiouville: return "subcritical_liouville";
    case RegimeKind::Critical: return "critical";
    case RegimeKind::Supercritical: return "supercritical";
  }
  return "unknown";
}

/// Witness tags. Each names the inequality that decided the regime.
namespace witness {
inline constexpr std::string_view kNbNonpositive = "N+b<=0";
inline constexpr std::string_view kBelowGap = "b<=a-2";
inline constexpr std::string_view kLinear = "p==1";
inline constexpr std::string_view kAtMostSerrin = "p<=p_serrin";
inline constexpr std::string_view kBelowCritical = "p<p_critical";
inline constexpr std::string_view kAtCritical = "|p-p_critical|<=tol*p_critical";
inline constexpr std::string_view kAboveCritical = "p>p_critical";
}  // namespace witness

struct Regime {
  RegimeKind kind = RegimeKind::InadmissibleWeights;
  std::string witness;
};

/// Places (N, a, b, p) in exactly one existence/nonexistence regime.
/// p == 1 is accepted here (and only here) and lands in the Serrin regime.
inline Regime classify(const ProblemParams& params) {
  validate(params);
  const auto [N, a, b, p] = params;
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw Error(Errc::InvalidExponent, "classify requires p >= 1");
  }
  if (N + b <= 0.0) return {RegimeKind::InadmissibleWeights, std::string(witness::kNbNonpositive)};
  if (b <= a - 2.0) return {RegimeKind::InadmissibleWeights, std::string(witness::kBelowGap)};
  if (p == 1.0) return {RegimeKind::NoPositiveSolutionSerrin, std::string(witness::kLinear)};
  if (p <= serrin_exponent(N, a, b)) {
    return {RegimeKind::NoPositiveSolutionSerrin, std::string(witness::kAtMostSerrin)};
  }
  if (is_critical(params)) return {RegimeKind::Critical, std::string(witness::kAtCritical)};
  if (p < critical_exponent(N, a, b)) {
    return {RegimeKind::SubcriticalLiouville, std::string(witness::kBelowCritical)};
  }
  return {RegimeKind::Supercritical, std::string(witness::kAboveCritical)};
}

enum class FsRegion { RadialMinimizer, SymmetryBreaking, NotApplicable };

constexpr std::string_view to_string(FsRegion region) noexcept {
  switch (region) {
    case FsRegion::RadialMinimizer: return "radial_minimizer";
    case FsRegion::SymmetryBreaking: return "symmetry_breaking";
    case FsRegion::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

/// |(N+b)/q + 1 - (N+a)/2|, the defect of the finite-energy balance.
inline double balance_defect(int N, double a, double b, double q) {
  return std::abs((N + b) / q + 1.0 - 0.5 * (N + a));
}

inline bool on_balance(int N, double a, double b, double q) {
  return balance_defect(N, a, b, q) <= kBalanceTol * std::max(1.0, std::abs(0.5 * (N + a)));
}

/// Radial versus symmetry-breaking minimizers of the CKN quotient with q = p + 1.
/// Only meaningful on the balance manifold.
inline FsRegion fs_region(const ProblemParams& params) {
  validate_superlinear(params);
  const auto [N, a, b, p] = params;
  const double q = p + 1.0;
  if (!on_balance(N, a, b, q)) {
    throw Error(Errc::BalanceViolated, "(N+b)/q + 1 != (N+a)/2 with q = p+1");
  }
  if (a <= 0.0) {
    if (-(N - 2.0) < a && b < 0.0) return FsRegion::RadialMinimizer;
    return FsRegion::NotApplicable;
  }
  return b <= q * beta_fs(N, a) ? FsRegion::RadialMinimizer : FsRegion::SymmetryBreaking;
}

}  // namespace cknlab
