#pragma once

/// \file serialize.hpp
/// JSON encodings (nlohmann) of the report types. Field names are the struct
/// member names; absent optionals encode as null.

#include <complex>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "cknlab/ckn_energy.hpp"
#include "cknlab/core_params.hpp"
#include "cknlab/emden_fowler.hpp"
#include "cknlab/pohozaev.hpp"
#include "cknlab/radial_shooter.hpp"

namespace cknlab {

using json = nlohmann::json;

namespace detail {
inline json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }
inline json complex_json(const std::complex<double>& z) { return {{"re", z.real()}, {"im", z.imag()}}; }
}  // namespace detail

inline void to_json(json& j, const ProblemParams& p) {
  j = {{"N", p.N}, {"a", p.a}, {"b", p.b}, {"p", p.p}};
}

inline void to_json(json& j, const CknTriple& t) {
  j = {{"N", t.N}, {"a", t.a}, {"b", t.b}, {"q", t.q}};
}

inline void to_json(json& j, const DerivedExponents& d) {
  j = {{"sigma", d.sigma},       {"p_serrin", d.p_serrin}, {"p_critical", d.p_critical},
       {"gamma", d.gamma},       {"lambda1", d.lambda1},   {"lambda2", d.lambda2},
       {"fs_b_threshold", detail::optional_json(d.fs_b_threshold)}};
}

inline void to_json(json& j, const Regime& r) {
  j = {{"kind", std::string(to_string(r.kind))}, {"witness", r.witness}};
}

inline void to_json(json& j, const ShootConfig& c) {
  j = {{"beta", c.beta},       {"r_max", c.r_max},       {"rel_tol", c.rel_tol},
       {"abs_tol", c.abs_tol}, {"epsilon0", c.epsilon0}, {"fixed_point_radius", c.fixed_point_radius},
       {"verify_events", c.verify_events}};
}

/// {kind, fields}
inline json outcome_json(const ShotOutcome& outcome) {
  json fields = json::object();
  if (const auto* c = std::get_if<CrossedZero>(&outcome)) {
    fields["r0"] = c->r0;
  } else if (const auto* g = std::get_if<PositiveGlobal>(&outcome)) {
    fields["r_reached"] = g->r_reached;
    fields["decay_exponent_estimate"] = g->decay_exponent_estimate;
  } else if (const auto* s = std::get_if<ConvergedToSingular>(&outcome)) {
    fields["r_reached"] = s->r_reached;
    fields["oscillation_count"] = s->oscillation_count;
  } else if (const auto* i = std::get_if<Inconclusive>(&outcome)) {
    fields["kind"] = std::string(to_string(i->kind));
    fields["reason"] = i->reason;
    if (i->r) fields["r"] = *i->r;
  }
  return {{"kind", std::string(outcome_name(outcome))}, {"fields", fields}};
}

inline void to_json(json& j, const ThresholdProbe& probe) {
  j = {{"p", probe.p},
       {"outcome", probe.outcome},
       {"crossing", probe.crossing},
       {"r0", detail::optional_json(probe.r0)}};
}

inline void to_json(json& j, const ThresholdResult& r) {
  j = {{"p_star", r.p_star}, {"p_lo", r.p_lo}, {"p_hi", r.p_hi}, {"probes", r.probes}};
}

inline void to_json(json& j, const FixedPointReport& f) {
  j = {{"w_star", f.w_star},
       {"mu1", detail::complex_json(f.mu1)},
       {"mu2", detail::complex_json(f.mu2)},
       {"kind", std::string(to_string(f.kind))},
       {"positive_real_part", f.positive_real_part},
       {"discriminant", f.discriminant}};
}

inline void to_json(json& j, const PohozaevReport& r) {
  j = {{"R", r.R},
       {"sphere_area", r.sphere_area},
       {"interior_coeff", r.interior_coeff},
       {"interior_integral", r.interior_integral},
       {"boundary_1", r.boundary_1},
       {"boundary_2", r.boundary_2},
       {"boundary_3", r.boundary_3},
       {"residual", r.residual},
       {"relative_residual", r.relative_residual},
       {"interpolation_error_estimate", r.interpolation_error_estimate}};
}

inline void to_json(json& j, const BalanceCheck& c) {
  j = {{"verdict", std::string(to_string(c.verdict))},
       {"balance_defect", c.balance_defect},
       {"necessary_conditions", c.necessary_conditions}};
}

inline void to_json(json& j, const EnergyReport& e) {
  j = {{"grad_norm_sq", e.grad_norm_sq},
       {"q_norm", e.q_norm},
       {"rayleigh", e.rayleigh},
       {"closed_form", detail::optional_json(e.closed_form)},
       {"s_estimate", e.s_estimate}};
}

}  // namespace cknlab
