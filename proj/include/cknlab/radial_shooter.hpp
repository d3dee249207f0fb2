#pragma once

/// \file radial_shooter.hpp
/// Shooting for the radial initial value problem
///
///     -(v'' + (N-1+a)/r v') = r^{b-a} v^p,   v(0) = beta,  v'(0) = 0,
///
/// started from a series expansion at a small radius and integrated in the
/// logarithmic variable t = ln r with state (v, r v'). The run stops at the
/// first zero of v or at r_max, and the trajectory is then classified.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cknlab/core_params.hpp"
#include "cknlab/dormand_prince.hpp"

namespace cknlab {

struct ShootConfig {
  double beta = 1.0;
  double r_max = 1e4;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double epsilon0 = 0.0;  // 0 selects 1e-4 * min(1, sigma)
  /// Radius of the ball around the Emden-Fowler fixed point, relative to w_star.
  double fixed_point_radius = 0.05;
  /// Re-shoot at rel_tol / 100 (down to kToleranceFloor) when the run shows
  /// crossing behavior, and keep the event only if its radius reproduces.
  bool verify_events = true;
};

inline constexpr double kToleranceFloor = 1e-14;
/// Relative change in the event radius accepted between a shot and its refinement.
inline constexpr double kEventReproTol = 1e-2;

struct RadialNode {
  double r = 0;
  double v = 0;
  double dv = 0;
};

struct CrossedZero {
  double r0 = 0;
};

struct PositiveGlobal {
  double r_reached = 0;
  double decay_exponent_estimate = 0;
};

struct ConvergedToSingular {
  double r_reached = 0;
  int oscillation_count = 0;
};

enum class InconclusiveReason {
  StepSizeUnderflow,
  MaxStepsExceeded,
  HorizonNotReached,
  FitWindowTooShort,
  /// No zero before r_max, but -r v'/v exceeded N-2+a somewhere. A positive
  /// entire solution cannot do that, so the zero lies beyond the horizon.
  SteeperThanEntireBound,
  /// The event radius kept moving under refinement down to kToleranceFloor.
  EventNotConverged,
};

constexpr std::string_view to_string(InconclusiveReason reason) noexcept {
  switch (reason) {
    case InconclusiveReason::StepSizeUnderflow: return "step_size_underflow";
    case InconclusiveReason::MaxStepsExceeded: return "max_steps_exceeded";
    case InconclusiveReason::HorizonNotReached: return "horizon_not_reached";
    case InconclusiveReason::FitWindowTooShort: return "fit_window_too_short";
    case InconclusiveReason::SteeperThanEntireBound: return "steeper_than_entire_bound";
    case InconclusiveReason::EventNotConverged: return "event_not_converged";
  }
  return "unknown";
}

struct Inconclusive {
  InconclusiveReason kind = InconclusiveReason::FitWindowTooShort;
  std::string reason;
  /// Radius of the offending node, where one exists.
  std::optional<double> r;
};

using ShotOutcome = std::variant<CrossedZero, PositiveGlobal, ConvergedToSingular, Inconclusive>;

inline std::string_view outcome_name(const ShotOutcome& outcome) {
  struct Visitor {
    std::string_view operator()(const CrossedZero&) const { return "crossed_zero"; }
    std::string_view operator()(const PositiveGlobal&) const { return "positive_global"; }
    std::string_view operator()(const ConvergedToSingular&) const { return "converged_to_singular"; }
    std::string_view operator()(const Inconclusive&) const { return "inconclusive"; }
  };
  return std::visit(Visitor{}, outcome);
}

/// True for a zero inside the horizon, or for a non-crossing run that is
/// already incompatible with a positive entire solution.
inline bool shows_crossing_behavior(const ShotOutcome& outcome) {
  if (std::holds_alternative<CrossedZero>(outcome)) return true;
  if (const auto* inc = std::get_if<Inconclusive>(&outcome)) {
    return inc->kind == InconclusiveReason::SteeperThanEntireBound;
  }
  return false;
}

struct RadialTrajectory {
  ProblemParams params;
  ShootConfig config;
  std::vector<RadialNode> nodes;
  ShotOutcome outcome;
};

struct SeriesStart {
  double r = 0;
  double v = 0;
  double dv = 0;
  /// Size of the first omitted term, c beta^{2p-1} r^{2 sigma}.
  double truncation_estimate = 0;
};

namespace detail {

inline void check_config(const ShootConfig& config) {
  const auto tol_ok = [](double tol) { return tol > 0.0 && tol <= 1e-3; };
  if (!(config.beta > 0.0) || !std::isfinite(config.beta)) {
    throw Error(Errc::InvalidConfig, "beta must be positive");
  }
  if (!(config.r_max >= 1.0) || !std::isfinite(config.r_max)) {
    throw Error(Errc::InvalidConfig, "r_max must be >= 1");
  }
  if (!tol_ok(config.rel_tol) || !(config.abs_tol > 0.0 && config.abs_tol <= 1e-3)) {
    throw Error(Errc::InvalidConfig, "tolerances must lie in (0, 1e-3]");
  }
  if (config.epsilon0 != 0.0 && !(config.epsilon0 > 0.0 && config.epsilon0 < 1.0)) {
    throw Error(Errc::InvalidConfig, "epsilon0 must lie in (0, 1)");
  }
  if (!(config.fixed_point_radius > 0.0)) {
    throw Error(Errc::InvalidConfig, "fixed_point_radius must be positive");
  }
}

inline void check_local_theory(const ProblemParams& params) {
  validate_superlinear(params);
  if (!(weight_gap(params.a, params.b) > 0.0)) {
    throw Error(Errc::InadmissibleWeights, "b <= a - 2: no local positive solution");
  }
  if (!(params.N + params.b > 0.0)) {
    throw Error(Errc::InadmissibleWeights, "N + b <= 0: no local positive solution");
  }
}

inline double signed_pow(double v, double p) {
  return v >= 0.0 ? std::pow(v, p) : -std::pow(-v, p);
}

/// Intrinsic length of the IVP family: v_beta(r) = beta v_1(beta^{(p-1)/sigma} r).
inline double length_scale(const ProblemParams& params, double beta) {
  const double sigma = weight_gap(params.a, params.b);
  return std::max(1.0, std::pow(beta, -(params.p - 1.0) / sigma));
}

}  // namespace detail

/// Two-term expansion of the fixed point of
///   T(v) = beta - int_0^r int_0^t s^{N-1+b} / t^{N-1+a} v(s)^p ds dt
/// at r = epsilon0, shrinking epsilon0 until the next term is below rel_tol * beta.
inline SeriesStart series_start(const ProblemParams& params, const ShootConfig& config) {
  detail::check_local_theory(params);
  detail::check_config(config);
  const auto [N, a, b, p] = params;
  const double sigma = weight_gap(a, b);
  const double beta = config.beta;
  const double beta_p = std::pow(beta, p);
  const double next_coeff =
      p * std::pow(beta, 2 * p - 1) / (2 * sigma * sigma * (N + b) * (N + b + sigma));

  double eps = config.epsilon0 > 0.0 ? config.epsilon0 : 1e-4 * std::min(1.0, sigma);
  while (next_coeff * std::pow(eps, 2 * sigma) > config.rel_tol * beta && eps > 1e-300) {
    eps *= 0.5;
  }
  SeriesStart start;
  start.r = eps;
  start.v = beta - beta_p * std::pow(eps, sigma) / (sigma * (N + b));
  start.dv = -beta_p * std::pow(eps, sigma - 1) / (N + b);
  start.truncation_estimate = next_coeff * std::pow(eps, 2 * sigma);
  return start;
}

namespace detail {

/// First radius where -r v'/v passes (N-2+a)(1 + margin), interpolated in ln r.
/// A positive entire solution stays below N-2+a; a zero always passes it first.
inline std::optional<double> slope_bound_radius(const RadialTrajectory& traj) {
  const auto& nodes = traj.nodes;
  const double k = traj.params.N - 2 + traj.params.a;
  const double margin = std::max(1e-6, 100.0 * traj.config.rel_tol);
  const auto excess = [&](const RadialNode& node) { return -node.r * node.dv / node.v - k * (1.0 + margin); };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i].r > 0.0)) continue;
    const double e1 = excess(nodes[i]);
    if (!(e1 > 0.0)) continue;
    if (i == 0 || !(nodes[i - 1].r > 0.0) || !std::isfinite(e1)) return nodes[i].r;
    const double e0 = excess(nodes[i - 1]);
    const double l0 = std::log(nodes[i - 1].r);
    return std::exp(l0 + (std::log(nodes[i].r) - l0) * e0 / (e0 - e1));
  }
  return std::nullopt;
}

}  // namespace detail

/// Assigns an outcome to a finished trajectory.
inline ShotOutcome classify_trajectory(const RadialTrajectory& traj) {
  const auto& nodes = traj.nodes;
  const auto& params = traj.params;
  if (nodes.empty()) return Inconclusive{InconclusiveReason::FitWindowTooShort, "empty trajectory", std::nullopt};

  // Bracketed sign change: the terminal node sits at or beyond the zero.
  if (nodes.size() >= 2 && nodes.back().v <= 0.0) {
    const auto& lo = nodes[nodes.size() - 2];
    const auto& hi = nodes.back();
    if (hi.v == 0.0 || lo.v <= 0.0) return CrossedZero{hi.r};
    return CrossedZero{lo.r + (hi.r - lo.r) * lo.v / (lo.v - hi.v)};
  }

  const double r_end = nodes.back().r;
  if (r_end < traj.config.r_max * (1.0 - 1e-12)) {
    return Inconclusive{InconclusiveReason::HorizonNotReached,
                        "integration stopped at r = " + std::to_string(r_end), std::nullopt};
  }

  if (const auto r_bound = detail::slope_bound_radius(traj)) {
    return Inconclusive{InconclusiveReason::SteeperThanEntireBound,
                        "-r v'/v exceeds N-2+a at r = " + std::to_string(*r_bound) +
                            "; no positive entire continuation, zero beyond r_max",
                        *r_bound};
  }

  const double scale = detail::length_scale(params, traj.config.beta);
  if (r_end < 10.0 * scale) {
    return Inconclusive{InconclusiveReason::FitWindowTooShort,
                        "r_max shorter than one decade past the intrinsic length", std::nullopt};
  }

  // Least-squares slope of log v against log r over the last decade.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (const auto& node : nodes) {
    if (node.r < r_end / 10.0 || node.r <= 0.0) continue;
    const double x = std::log(node.r);
    const double y = std::log(node.v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 3) {
    return Inconclusive{InconclusiveReason::FitWindowTooShort, "fewer than 3 nodes in the last decade", std::nullopt};
  }
  const double n = static_cast<double>(count);
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  // Emden-Fowler image near the fixed point (w_star, 0) over the last decade.
  const double k = params.N - 2 + params.a;
  const double p = params.p;
  if (p > serrin_exponent(params.N, params.a, params.b)) {
    const double gamma = weight_gap(params.a, params.b) / (p - 1.0);
    const double lambda2 = gamma * (k - gamma);
    const double w_star = std::pow(lambda2, 1.0 / (p - 1.0));
    bool inside = true;
    int oscillations = 0;
    double prev_offset = 0.0;
    for (const auto& node : nodes) {
      if (node.r <= 0.0) continue;
      const double rg = std::pow(node.r, gamma);
      const double w = rg * node.v;
      const double dw = rg * (gamma * node.v + node.r * node.dv);
      const double offset = w - w_star;
      if (prev_offset != 0.0 && offset != 0.0 && (offset > 0.0) != (prev_offset > 0.0)) ++oscillations;
      if (offset != 0.0) prev_offset = offset;
      if (node.r >= r_end / 10.0 &&
          std::hypot(offset, dw) > traj.config.fixed_point_radius * w_star) {
        inside = false;
      }
    }
    if (inside) return ConvergedToSingular{r_end, oscillations};
  }
  return PositiveGlobal{r_end, -slope};
}

namespace detail {

inline RadialTrajectory shoot_once(const ProblemParams& params, const ShootConfig& config) {
  const SeriesStart start = series_start(params, config);
  const auto [N, a, b, p] = params;
  const double sigma = weight_gap(a, b);
  const double one_minus_k = 2.0 - N - a;

  RadialTrajectory traj;
  traj.params = params;
  traj.config = config;
  traj.config.epsilon0 = start.r;
  traj.nodes.push_back({start.r, start.v, start.dv});

  // t = ln r, y = (v, r v').
  const auto rhs = [&](double t, const ode::State<2>& y) -> ode::State<2> {
    return {y[1], one_minus_k * y[1] - std::exp(sigma * t) * detail::signed_pow(y[0], p)};
  };

  ode::StepperOptions opt;
  opt.rel_tol = config.rel_tol;
  opt.abs_tol = config.abs_tol;
  opt.max_step = std::log(10.0) / 8;  // keeps the tail fits supplied with nodes
  const double t0 = std::log(start.r);
  const double t_end = std::log(config.r_max);

  const auto observer = [&](const ode::DenseStep<2>& step) {
    if (step.y1[0] > 0.0) {
      const double r = std::exp(step.t1);
      traj.nodes.push_back({r, step.y1[0], step.y1[1] / r});
      return true;
    }
    // Sign change inside the step: bisect the dense output.
    double lo = step.t0;
    double hi = step.t1;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (step.at(mid)[0] > 0.0) lo = mid; else hi = mid;
    }
    const double t_zero = 0.5 * (lo + hi);
    const auto y = step.at(t_zero);
    const double r0 = std::exp(t_zero);
    if (r0 > traj.nodes.back().r) traj.nodes.push_back({r0, 0.0, y[1] / r0});
    else traj.nodes.back().v = 0.0;
    return false;
  };

  const auto status = t_end > t0
                          ? ode::integrate<2>(rhs, t0, {start.v, start.r * start.dv}, t_end, opt, observer)
                          : ode::StepStatus::ReachedEnd;
  if (status == ode::StepStatus::StepSizeUnderflow) {
    traj.outcome = Inconclusive{InconclusiveReason::StepSizeUnderflow, "step size underflow", std::nullopt};
  } else if (status == ode::StepStatus::MaxStepsExceeded) {
    traj.outcome = Inconclusive{InconclusiveReason::MaxStepsExceeded, "step budget exhausted", std::nullopt};
  } else {
    traj.outcome = classify_trajectory(traj);
  }
  return traj;
}

/// Slope-bound radius of a run that shows crossing behavior.
inline std::optional<double> event_radius(const RadialTrajectory& traj) {
  if (!shows_crossing_behavior(traj.outcome)) return std::nullopt;
  return slope_bound_radius(traj);
}

/// Keeps the nodes below r_trust and classifies them as a run with that horizon.
inline RadialTrajectory truncate(RadialTrajectory traj, double r_trust) {
  while (traj.nodes.size() > 1 && traj.nodes.back().r > r_trust) traj.nodes.pop_back();
  traj.config.r_max = traj.nodes.back().r;
  traj.outcome = classify_trajectory(traj);
  return traj;
}

}  // namespace detail

/// Integrates the IVP from the series hand-off to r_max or the first zero of v.
///
/// Near p_c the positive solution is close to a homoclinic orbit: integration
/// error feeds the far-field mode, which grows like r^{N-2+a} relative to the
/// solution and can push it across zero far out. With verify_events set, a run
/// showing crossing behavior is repeated at rel_tol / 100, and the event is
/// kept only if its slope-bound radius reproduces to kEventReproTol. If the
/// radius keeps moving outward down to kToleranceFloor, the event is taken as
/// drift and the finest run is classified on [0, r/2]; the reduced horizon is
/// recorded in config.r_max. Any other unreproducible event is Inconclusive.
inline RadialTrajectory shoot(const ProblemParams& params, const ShootConfig& config) {
  RadialTrajectory traj = detail::shoot_once(params, config);
  if (!config.verify_events) return traj;
  bool moved = false;
  bool outward = true;
  while (auto r_event = detail::event_radius(traj)) {
    if (traj.config.rel_tol <= kToleranceFloor) {
      if (!moved) break;
      if (outward) return detail::truncate(std::move(traj), 0.5 * *r_event);
      traj.outcome = Inconclusive{InconclusiveReason::EventNotConverged,
                                  "event radius not reproducible down to rel_tol = " +
                                      std::to_string(traj.config.rel_tol),
                                  *r_event};
      break;
    }
    ShootConfig finer = traj.config;
    finer.epsilon0 = config.epsilon0;
    finer.rel_tol = std::max(kToleranceFloor, traj.config.rel_tol / 100.0);
    finer.abs_tol = traj.config.abs_tol * (finer.rel_tol / traj.config.rel_tol);
    RadialTrajectory next = detail::shoot_once(params, finer);
    const auto r_next = detail::event_radius(next);
    if (r_next && std::abs(*r_next - *r_event) <= kEventReproTol * *r_event) break;
    if (r_next && *r_next < *r_event) outward = false;
    traj = std::move(next);
    moved = true;
  }
  return traj;
}

struct ThresholdProbe {
  double p = 0;
  std::string outcome;
  bool crossing = false;
  std::optional<double> r0;
};

struct ThresholdResult {
  double p_star = 0;
  double p_lo = 0;
  double p_hi = 0;
  std::vector<ThresholdProbe> probes;
};

/// Bisection in p for the change from crossing behavior (p_lo) to
/// non-crossing behavior (p_hi), shooting with beta = 1. Assumes the
/// behavior is monotone in p; every probe is recorded in the result.
inline ThresholdResult threshold_bisect(int N, double a, double b, double p_lo, double p_hi,
                                        double tol_p, ShootConfig config = {}) {
  if (!(tol_p > 0.0) || !(p_hi > p_lo)) {
    throw Error(Errc::BracketInvalid, "need p_lo < p_hi and tol_p > 0");
  }
  if (!(p_lo > serrin_exponent(N, a, b))) {
    throw Error(Errc::BracketInvalid, "p_lo must exceed the Serrin exponent");
  }
  config.beta = 1.0;
  ThresholdResult result;
  const auto probe = [&](double p) {
    const auto traj = shoot(ProblemParams{N, a, b, p}, config);
    ThresholdProbe entry;
    entry.p = p;
    entry.outcome = std::string(outcome_name(traj.outcome));
    entry.crossing = shows_crossing_behavior(traj.outcome);
    if (const auto* c = std::get_if<CrossedZero>(&traj.outcome)) entry.r0 = c->r0;
    result.probes.push_back(entry);
    return entry.crossing;
  };
  if (!probe(p_lo)) throw Error(Errc::BracketInvalid, "no crossing behavior at p_lo");
  if (probe(p_hi)) throw Error(Errc::BracketInvalid, "crossing behavior at p_hi");
  while (p_hi - p_lo >= tol_p) {
    const double mid = 0.5 * (p_lo + p_hi);
    if (probe(mid)) p_lo = mid; else p_hi = mid;
  }
  result.p_lo = p_lo;
  result.p_hi = p_hi;
  result.p_star = 0.5 * (p_lo + p_hi);
  return result;
}

}  // namespace cknlab
