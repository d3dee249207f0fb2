#pragma once

/// \file closed_forms.hpp
/// Explicit radial solutions: the critical bubble family and the singular
/// power-law solution, plus the pointwise defect of the radial equation
///
///     v'' + (N-1+a)/r v' + r^{b-a} v^p = 0.
///
/// Everything here is templated on the scalar type so the residual checks can
/// be run in extended precision; the default is double.

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <utility>

#include <boost/math/special_functions/log1p.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cknlab/core_params.hpp"

namespace cknlab {

namespace detail {

template <class Real>
Real log1p_any(const Real& x) {
  if constexpr (std::is_floating_point_v<Real>) {
    return std::log1p(x);
  } else {
    return boost::math::log1p(x);
  }
}

/// log(1 + e^L) without overflow for large L.
template <class Real>
Real softplus(const Real& L) {
  using std::exp;
  if (L > 0) return L + log1p_any(Real(exp(-L)));
  return log1p_any(Real(exp(L)));
}

/// e^L / (1 + e^L).
template <class Real>
Real logistic(const Real& L) {
  using std::exp;
  if (L > 0) return Real(1) / (Real(1) + exp(-L));
  const Real e = exp(L);
  return e / (Real(1) + e);
}

}  // namespace detail

/// Value and first two radial derivatives of a profile at one radius.
template <class Real = double>
struct Jet {
  Real v{};
  Real dv{};
  Real ddv{};
};

struct RadialValue {
  double v = 0;
  double dv = 0;
};

/// A * [m (m+1) sigma^2]^{1/(p-1)} with m = (N-2+a)/sigma; the constant that turns
/// (1 + r^sigma)^{-m} into an exact solution at p = p_critical.
inline double bubble_amplitude(const ProblemParams& params) {
  validate_superlinear(params);
  if (!is_critical(params)) {
    throw Error(Errc::NotCritical, "the bubble exists only at p = p_critical");
  }
  const double sigma = weight_gap(params.a, params.b);
  if (!(sigma > 0.0)) throw Error(Errc::InadmissibleWeights, "b <= a - 2");
  const double m = (params.N - 2 + params.a) / sigma;
  return std::pow(m * (m + 1.0) * sigma * sigma, 1.0 / (params.p - 1.0));
}

/// u(r) = amplitude * lambda^gamma * (1 + (lambda r)^sigma)^{-m}, gamma = (N-2+a)/2.
template <class Real = double>
struct BubbleProfile {
  ProblemParams params;
  Real sigma{};
  Real m{};
  Real gamma{};
  Real amplitude{};
  Real lambda_scale{1};
};

template <class Real = double>
BubbleProfile<Real> make_bubble(const ProblemParams& params, Real lambda_scale = Real(1)) {
  using std::pow;
  bubble_amplitude(params);  // validates criticality
  if (!(lambda_scale > 0)) throw Error(Errc::InvalidConfig, "lambda_scale must be positive");
  BubbleProfile<Real> profile;
  profile.params = params;
  const Real N = params.N;
  const Real a = params.a;
  const Real b = params.b;
  profile.sigma = Real(2) + b - a;
  profile.m = (N - 2 + a) / profile.sigma;
  profile.gamma = (N - 2 + a) / 2;
  // p - 1 = 2 sigma / (N - 2 + a) exactly at criticality; use it in Real arithmetic.
  const Real p_minus_1 = Real(2) / profile.m;
  profile.amplitude = pow(profile.m * (profile.m + 1) * profile.sigma * profile.sigma,
                          Real(1) / p_minus_1);
  profile.lambda_scale = lambda_scale;
  return profile;
}

/// The member of the bubble family with v(0) = 1: lambda = A^{-2/(N-2+a)}.
template <class Real = double>
BubbleProfile<Real> normalized_bubble(const ProblemParams& params) {
  using std::pow;
  auto profile = make_bubble<Real>(params);
  profile.lambda_scale = pow(profile.amplitude, Real(-1) / profile.gamma);
  return profile;
}

template <class Real>
Real bubble_value(const BubbleProfile<Real>& profile, const Real& r) {
  using std::exp;
  using std::log;
  using std::pow;
  const Real scale = profile.amplitude * pow(profile.lambda_scale, profile.gamma);
  if (r == 0) return scale;
  const Real L = profile.sigma * log(profile.lambda_scale * r);
  return scale * exp(-profile.m * detail::softplus(L));
}

/// v, v', v'' of the scaled bubble at r > 0.
template <class Real>
Jet<Real> bubble_jet(const BubbleProfile<Real>& profile, const Real& r) {
  using std::log;
  if (!(r > 0)) throw Error(Errc::NonpositiveRadius, "bubble_jet needs r > 0");
  const Real L = profile.sigma * log(profile.lambda_scale * r);
  const Real y = detail::logistic(L);  // x / (1 + x), x = (lambda r)^sigma
  const Real ms = profile.m * profile.sigma;
  Jet<Real> jet;
  jet.v = bubble_value(profile, r);
  jet.dv = -jet.v * ms * y / r;
  // v'' = v ms / r^2 [ (ms + 1) y^2 - (sigma - 1) y (1 - y) ]
  jet.ddv = jet.v * ms / (r * r) *
            ((ms + 1) * y * y - (profile.sigma - 1) * y * (Real(1) - y));
  return jet;
}

/// Value and radial derivative; at r = 0 the derivative exists only for sigma >= 1.
inline RadialValue bubble_eval(const BubbleProfile<double>& profile, double r) {
  if (r < 0.0) throw Error(Errc::NonpositiveRadius, "bubble_eval needs r >= 0");
  if (r == 0.0) {
    const double v0 = bubble_value(profile, 0.0);
    if (profile.sigma < 1.0) {
      throw Error(Errc::DerivativeUndefinedAtOrigin, "v'(0) is infinite for sigma < 1");
    }
    const double dv0 = profile.sigma == 1.0 ? -v0 * profile.m * profile.lambda_scale : 0.0;
    return {v0, dv0};
  }
  const auto jet = bubble_jet(profile, r);
  return {jet.v, jet.dv};
}

/// [gamma (N-2+a-gamma)]^{1/(p-1)} with gamma = (2+b-a)/(p-1); needs p > p_serrin.
inline double singular_amplitude(const ProblemParams& params) {
  validate_superlinear(params);
  const double sigma = weight_gap(params.a, params.b);
  if (!(sigma > 0.0) || params.N + params.b <= 0.0) {
    throw Error(Errc::InadmissibleWeights, "singular solution needs b > a - 2 and N + b > 0");
  }
  if (!(params.p > serrin_exponent(params.N, params.a, params.b))) {
    throw Error(Errc::NotInSerrinSupercriticalRange, "p <= p_serrin");
  }
  const double gamma = sigma / (params.p - 1.0);
  return std::pow(gamma * (params.N - 2 + params.a - gamma), 1.0 / (params.p - 1.0));
}

inline double singular_eval(const ProblemParams& params, double r) {
  const double amplitude = singular_amplitude(params);
  if (!(r > 0.0)) throw Error(Errc::NonpositiveRadius, "singular solution needs r > 0");
  const double gamma = weight_gap(params.a, params.b) / (params.p - 1.0);
  return amplitude * std::pow(r, -gamma);
}

inline Jet<double> singular_jet(const ProblemParams& params, double r) {
  const double gamma = weight_gap(params.a, params.b) / (params.p - 1.0);
  Jet<double> jet;
  jet.v = singular_eval(params, r);
  jet.dv = -gamma * jet.v / r;
  jet.ddv = gamma * (gamma + 1.0) * jet.v / (r * r);
  return jet;
}

/// ddv + ((N-1+a)/r) dv + r^{b-a} v^p.
template <class Real>
Real residual(const ProblemParams& params, const Real& v, const Real& dv, const Real& ddv,
              const Real& r) {
  using std::pow;
  const Real a = params.a;
  const Real b = params.b;
  const Real p = params.p;
  return ddv + (Real(params.N) - 1 + a) / r * dv + pow(r, b - a) * pow(v, p);
}

/// residual() divided by the source term r^{b-a} v^p.
template <class Real>
Real relative_residual(const ProblemParams& params, const Real& v, const Real& dv,
                       const Real& ddv, const Real& r) {
  using std::pow;
  const Real source = pow(r, Real(params.b) - Real(params.a)) * pow(v, Real(params.p));
  return residual(params, v, dv, ddv, r) / source;
}

/// Largest |relative_residual| of the bubble (dilation lambda_scale) over
/// `samples` log-spaced radii in [r_lo, r_hi], evaluated in quad precision.
inline double max_bubble_residual(const ProblemParams& params, int samples, double r_lo = 1e-3,
                                  double r_hi = 1e3, double lambda_scale = 1.0) {
  using Quad = boost::multiprecision::cpp_bin_float_quad;
  if (samples < 1) throw Error(Errc::InvalidConfig, "samples must be >= 1");
  if (!(r_lo > 0.0) || !(r_hi >= r_lo)) throw Error(Errc::NonpositiveRadius, "need 0 < r_lo <= r_hi");
  const auto bubble = make_bubble<Quad>(params, Quad(lambda_scale));
  ProblemParams exact = params;
  exact.p = critical_exponent(params.N, params.a, params.b);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double s = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
    const Quad r = Quad(r_lo) * pow(Quad(r_hi) / Quad(r_lo), Quad(s));
    const auto jet = bubble_jet(bubble, r);
    const Quad rel = relative_residual(exact, jet.v, jet.dv, jet.ddv, r);
    worst = std::max(worst, std::abs(static_cast<double>(rel)));
  }
  return worst;
}

}  // namespace cknlab
