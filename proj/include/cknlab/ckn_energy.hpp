#pragma once

/// \file ckn_energy.hpp
/// Caffarelli-Kohn-Nirenberg quotient for radial profiles,
///
///   E(u) = int |x|^a |Du|^2 / ( int |x|^b |u|^q )^{2/q},
///
/// its value on the explicit bubble, and the admissibility/balance checks
/// for the exponent triple (a, b, q).

#include <cmath>
#include <functional>
#include <optional>
#include <string_view>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cknlab/closed_forms.hpp"
#include "cknlab/core_params.hpp"
#include "cknlab/pohozaev.hpp"

namespace cknlab {

struct CknTriple {
  int N = 3;
  double a = 0;
  double b = 0;
  double q = 2;

  /// The equation whose Euler-Lagrange structure matches this triple: p = q - 1.
  ProblemParams as_params() const { return {N, a, b, q - 1.0}; }
};

enum class BalanceVerdict { Admissible, BandViolated, BalanceViolated };

constexpr std::string_view to_string(BalanceVerdict verdict) noexcept {
  switch (verdict) {
    case BalanceVerdict::Admissible: return "admissible";
    case BalanceVerdict::BandViolated: return "band_violated";
    case BalanceVerdict::BalanceViolated: return "balance_violated";
  }
  return "unknown";
}

struct BalanceCheck {
  BalanceVerdict verdict = BalanceVerdict::BalanceViolated;
  double balance_defect = 0;
  /// q > 2, b > a - 2 > -N and the balance: what any finite energy solution forces.
  bool necessary_conditions = false;
};

inline BalanceCheck check_balance(const CknTriple& t) {
  if (t.N < 3) throw Error(Errc::DimensionTooSmall, "N < 3");
  if (!(t.q >= 2.0)) throw Error(Errc::InvalidExponent, "q must be >= 2");
  BalanceCheck out;
  out.balance_defect = balance_defect(t.N, t.a, t.b, t.q);
  const bool balanced = on_balance(t.N, t.a, t.b, t.q);
  const double ratio = 2.0 * t.b / t.q;
  constexpr double slack = 1e-12;
  const bool band = t.a - 2.0 <= ratio + slack && ratio <= t.a + slack;
  if (!balanced) out.verdict = BalanceVerdict::BalanceViolated;
  else if (!band) out.verdict = BalanceVerdict::BandViolated;
  else out.verdict = BalanceVerdict::Admissible;
  out.necessary_conditions = t.q > 2.0 && t.b > t.a - 2.0 && t.a - 2.0 > -t.N && balanced;
  return out;
}

struct EnergyReport {
  double grad_norm_sq = 0;
  double q_norm = 0;
  double rayleigh = 0;
  std::optional<double> closed_form;
  double s_estimate = 0;
};

using RadialProfile = std::function<RadialValue(double r)>;

/// Tail contributions below this fraction of the integral are truncated.
inline constexpr double kTailRelTol = 1e-10;

namespace detail {

/// int_0^inf f(r) dr as int g(t) dt with g(t) = exp(log_g(t)), r = e^t. The
/// window grows by a decade per side until the fitted exponential tail on each
/// side is below kTailRelTol of the total; the tails are then added.
template <class LogIntegrand>
double integrate_half_line(const LogIntegrand& log_g) {
  using boost::math::quadrature::gauss_kronrod;
  const auto g = [&](double t) { return std::exp(log_g(t)); };
  const auto piece = [&](double lo, double hi) {
    return gauss_kronrod<double, 61>::integrate(g, lo, hi, 20, 1e-14);
  };
  // Decay rate of g beyond `edge`, pointing outward (dir = +1 upper, -1 lower).
  const auto decay_rate = [&](double edge, double dir) {
    constexpr double dt = 0.5;
    return (log_g(edge - dir * dt) - log_g(edge)) / dt;
  };
  const auto tail = [&](double edge, double rate) {
    return rate > 0.0 ? std::exp(log_g(edge)) / rate : INFINITY;
  };

  constexpr double step = 2.302585092994046;  // ln 10
  constexpr int max_expansions = 60;
  constexpr double min_rate = 1e-3;
  double lo = -3 * step, hi = 3 * step;
  double total = piece(lo, hi);
  bool lo_done = false, hi_done = false;
  double tail_lo = 0, tail_hi = 0;
  for (int i = 0; i < max_expansions && !(lo_done && hi_done); ++i) {
    if (!hi_done) {
      const double edge_log = log_g(hi);
      const double rate = decay_rate(hi, +1.0);
      tail_hi = std::isfinite(edge_log) ? tail(hi, rate) : 0.0;
      // log g = -inf: the profile has underflowed to zero at this edge.
      if (edge_log == -INFINITY || (rate > min_rate && tail_hi < kTailRelTol * std::abs(total))) {
        hi_done = true;
      } else {
        total += piece(hi, hi + step);
        hi += step;
      }
    }
    if (!lo_done) {
      const double edge_log = log_g(lo);
      const double rate = decay_rate(lo, -1.0);
      tail_lo = std::isfinite(edge_log) ? tail(lo, rate) : 0.0;
      // log g = -inf: the profile has underflowed to zero at this edge.
      if (edge_log == -INFINITY || (rate > min_rate && tail_lo < kTailRelTol * std::abs(total))) {
        lo_done = true;
      } else {
        total += piece(lo - step, lo);
        lo -= step;
      }
    }
  }
  if (!(lo_done && hi_done) || !std::isfinite(total)) {
    throw Error(Errc::NonintegrableProfile, "fitted power-law tail does not decay");
  }
  return total + tail_lo + tail_hi;
}

}  // namespace detail

/// Weighted norms and the quotient for a positive, decaying radial profile.
inline EnergyReport energy(const CknTriple& triple, const RadialProfile& profile) {
  if (triple.N < 3) throw Error(Errc::DimensionTooSmall, "N < 3");
  if (!(triple.q >= 2.0)) throw Error(Errc::InvalidExponent, "q must be >= 2");
  const double N = triple.N;
  const double grad_w = N + triple.a;  // r^{N-1+a} dr = e^{(N+a)t} dt
  const double q_w = N + triple.b;
  const double q = triple.q;

  const double grad = detail::integrate_half_line([&](double t) {
    const double dv = profile(std::exp(t)).dv;
    return grad_w * t + 2.0 * std::log(std::abs(dv));
  });
  const double qint = detail::integrate_half_line([&](double t) {
    const double v = profile(std::exp(t)).v;
    return q_w * t + q * std::log(std::abs(v));
  });

  const double omega = sphere_area(triple.N);
  EnergyReport rep;
  rep.grad_norm_sq = omega * grad;
  rep.q_norm = std::pow(omega * qint, 1.0 / q);
  rep.rayleigh = rep.grad_norm_sq / (rep.q_norm * rep.q_norm);
  rep.s_estimate = rep.rayleigh;
  return rep;
}

/// E(bubble) via s = r^sigma and Beta integrals, m = (N-2+a)/sigma:
///   int r^{N-1+a} (h')^2 = m^2 sigma B(m+2, m),
///   int r^{N-1+b} h^q    = B(m+1, m+1) / sigma   (on the balance manifold).
inline double bubble_energy_closed_form(const CknTriple& triple) {
  if (!on_balance(triple.N, triple.a, triple.b, triple.q)) {
    throw Error(Errc::BalanceViolated, "closed form needs the balance condition");
  }
  const double sigma = weight_gap(triple.a, triple.b);
  const double m = (triple.N - 2 + triple.a) / sigma;
  const double omega = sphere_area(triple.N);
  const double grad = omega * m * m * sigma * std::beta(m + 2.0, m);
  const double qint = omega * std::beta(m + 1.0, m + 1.0) / sigma;
  return grad / std::pow(qint, 2.0 / triple.q);
}

/// Adapts a bubble to the RadialProfile interface.
inline RadialProfile bubble_profile(const BubbleProfile<double>& bubble) {
  return [bubble](double r) { return bubble_eval(bubble, r); };
}

/// The best constant S(a, b) as the quotient of the explicit minimizer. Refuses
/// in the symmetry-breaking region, where the minimizer is not radial.
inline EnergyReport best_constant(const CknTriple& triple) {
  const auto check = check_balance(triple);
  if (check.verdict != BalanceVerdict::Admissible) {
    throw Error(Errc::BalanceViolated, "triple is not admissible: " + std::string(to_string(check.verdict)));
  }
  const ProblemParams params = triple.as_params();
  if (fs_region(params) == FsRegion::SymmetryBreaking) {
    throw Error(Errc::SymmetryBreakingRegion, "b > q beta_FS(a): non-radial minimizers exist");
  }
  EnergyReport rep = energy(triple, bubble_profile(make_bubble<double>(params)));
  rep.closed_form = bubble_energy_closed_form(triple);
  return rep;
}

}  // namespace cknlab
