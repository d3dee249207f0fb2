#pragma once

/// \file dormand_prince.hpp
/// Adaptive Dormand-Prince 5(4) stepper with Hairer's fourth-order continuous
/// extension. Used by the radial shooter and the cylinder-variable integrator.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>

namespace cknlab::ode {

template <std::size_t D>
using State = std::array<double, D>;

struct StepperOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0 picks a step from the tolerances
  double max_step = 0.0;      // 0 means unbounded
  long max_steps = 2'000'000;
};

enum class StepStatus { ReachedEnd, StoppedByObserver, StepSizeUnderflow, MaxStepsExceeded };

/// One accepted step, with dense output on [t0, t1].
template <std::size_t D>
struct DenseStep {
  double t0 = 0;
  double t1 = 0;
  State<D> y0{};
  State<D> y1{};
  std::array<State<D>, 5> coeffs{};

  State<D> at(double t) const {
    const double theta = (t - t0) / (t1 - t0);
    const double theta1 = 1.0 - theta;
    State<D> y;
    for (std::size_t i = 0; i < D; ++i) {
      const auto& c = coeffs;
      y[i] = c[0][i] + theta * (c[1][i] + theta1 * (c[2][i] + theta * (c[3][i] + theta1 * c[4][i])));
    }
    return y;
  }
};

namespace dp {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace dp

/// Integrates y' = rhs(t, y) from t0 to t_end (t_end > t0). After each accepted
/// step, observer(step) is called; returning false stops the integration.
template <std::size_t D, class Rhs, class Observer>
StepStatus integrate(const Rhs& rhs, double t0, const State<D>& y0, double t_end,
                     const StepperOptions& opt, Observer&& observer) {
  using namespace dp;
  auto axpy = [](const State<D>& y, double h, std::initializer_list<std::pair<double, const State<D>*>> terms) {
    State<D> out = y;
    for (const auto& [coef, k] : terms) {
      for (std::size_t i = 0; i < D; ++i) out[i] += h * coef * (*k)[i];
    }
    return out;
  };
  auto scale = [&](const State<D>& a, const State<D>& b, std::size_t i) {
    return opt.abs_tol + opt.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
  };

  double t = t0;
  State<D> y = y0;
  State<D> k1 = rhs(t, y);

  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic, first half only.
    double d0 = 0, d1n = 0;
    for (std::size_t i = 0; i < D; ++i) {
      const double sk = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
      d0 += (y[i] / sk) * (y[i] / sk);
      d1n += (k1[i] / sk) * (k1[i] / sk);
    }
    h = (d0 < 1e-10 || d1n < 1e-10) ? 1e-6 : 0.01 * std::sqrt(d0 / d1n);
  }
  h = std::min(h, t_end - t);
  if (opt.max_step > 0) h = std::min(h, opt.max_step);

  long steps = 0;
  double fac_old = 1e-4;
  while (t < t_end) {
    if (++steps > opt.max_steps) return StepStatus::MaxStepsExceeded;
    if (h < 1e-14 * std::max(1.0, std::abs(t))) return StepStatus::StepSizeUnderflow;
    bool last = false;
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    }

    const State<D> k2 = rhs(t + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State<D> k3 = rhs(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State<D> k4 = rhs(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State<D> k5 =
        rhs(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State<D> k6 =
        rhs(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State<D> y_new =
        axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const State<D> k7 = rhs(t + h, y_new);

    double err = 0;
    bool finite = true;
    for (std::size_t i = 0; i < D; ++i) {
      const double e =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double r = e / scale(y, y_new, i);
      err += r * r;
      finite = finite && std::isfinite(y_new[i]);
    }
    err = finite ? std::sqrt(err / D) : 1e10;

    if (err <= 1.0) {
      DenseStep<D> step;
      step.t0 = t;
      step.t1 = last ? t_end : t + h;
      step.y0 = y;
      step.y1 = y_new;
      for (std::size_t i = 0; i < D; ++i) {
        const double ydiff = y_new[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        step.coeffs[0][i] = y[i];
        step.coeffs[1][i] = ydiff;
        step.coeffs[2][i] = bspl;
        step.coeffs[3][i] = ydiff - h * k7[i] - bspl;
        step.coeffs[4][i] =
            h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      t = step.t1;
      y = y_new;
      k1 = k7;
      if (!observer(step)) return StepStatus::StoppedByObserver;
      if (last) return StepStatus::ReachedEnd;
      // PI controller (Hairer's dopri5 defaults: beta = 0.04).
      const double fac11 = std::pow(std::max(err, 1e-16), 0.2 - 0.04 * 0.75);
      double fac = fac11 / std::pow(fac_old, 0.04);
      fac = std::clamp(fac / 0.9, 0.1, 5.0);
      h /= fac;
      fac_old = std::max(err, 1e-4);
    } else {
      h /= std::min(5.0, std::pow(err, 0.2 - 0.04 * 0.75) / 0.9);
    }
    if (opt.max_step > 0) h = std::min(h, opt.max_step);
  }
  return StepStatus::ReachedEnd;
}

}  // namespace cknlab::ode
