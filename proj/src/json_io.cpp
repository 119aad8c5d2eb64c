// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/json_io.hpp"

namespace lelong {

using nlohmann::json;

namespace {
json finite(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json cvec(const std::vector<cdouble>& v) {
  json a = json::array();
  for (const auto& c : v) a.push_back({c.real(), c.imag()});
  return a;
}
}  // namespace

json describe(const mc::ThresholdEstimate& e) {
  json curve = json::array();
  for (const auto& [s, ee, se] : e.exponent_curve) curve.push_back({s, finite(ee), finite(se)});
  json j{{"nu_hat", e.nu_hat},
         {"ci", {e.ci_lo, finite(e.ci_hi)}},
         {"radial_root", e.radial_root},
         {"radial_se", e.radial_se},
         {"exponent_curve", curve},
         {"bisection_trace", e.bisection_trace},
         {"seed", e.seed},
         {"warnings", e.warnings}};
  if (e.tail_nu) {
    j["tail_nu"] = *e.tail_nu;
    j["tail_se"] = e.tail_se;
  }
  return j;
}

json describe(const mc::AnnulusProfile& p) {
  json masses = json::array(), errs = json::array();
  for (double m : p.masses) masses.push_back(finite(m));
  for (double s : p.stderrs) errs.push_back(finite(s));
  json j{{"k_min", p.k_min}, {"k_max", p.k_max},
         {"s", p.s},         {"seed", p.seed},
         {"masses", masses}, {"stderrs", errs},
         {"clipped", p.clipped}, {"band_fraction", p.band_fraction},
         {"divergent", p.divergent}};
  if (p.tail_beta) {
    j["tail_beta"] = *p.tail_beta;
    j["tail_beta_se"] = p.tail_beta_se;
  }
  return j;
}

json describe(const AdmissibilityReport& r) {
  return json{{"radial_shortcut", r.radial_shortcut},
              {"integrability_margin_ok", r.integrability_margin_ok},
              {"decay_exponent", finite(r.decay_exponent)},
              {"decay_exponent_se", finite(r.decay_exponent_se)},
              {"decay_predicted", r.decay_predicted},
              {"lower_bound_ok", r.lower_bound_ok},
              {"worst_ratio", finite(r.worst_ratio)},
              {"hoelder_ok", r.hoelder_ok},
              {"hoelder_quotient_shallow", finite(r.hoelder_quotient_shallow)},
              {"hoelder_quotient_deep", finite(r.hoelder_quotient_deep)},
              {"hoelder_trend", finite(r.hoelder_trend)},
              {"lelong_estimate", r.lelong_estimate},
              {"lelong_se", r.lelong_se},
              {"seed", r.seed},
              {"samples", r.samples}};
}

json describe(const SkodaReport& r) {
  json v = json::array();
  for (const auto& viol : r.violations) v.push_back({{"t", viol.t.str()}, {"what", viol.what}});
  return json{{"checked", r.checked}, {"violations", v}, {"ok", r.ok()}};
}

json describe(const ExactValue& v) {
  json j{{"value", v.value}};
  if (v.rat) j["rational"] = v.rat->str();
  return j;
}

json describe(const geom::GrassmannCheck& g) {
  return json{{"lhs", g.lhs},
              {"rhs", g.rhs},
              {"rel_error", g.rel_error},
              {"plane_variance", g.plane_variance},
              {"planes", g.planes},
              {"samples_per_plane", g.samples_per_plane}};
}

json describe(const geom::LineRestrictionEstimate& l) {
  return json{{"median", l.median},
              {"mad", l.mad},
              {"multimodal", l.multimodal},
              {"per_line", l.per_line},
              {"ci_lo", l.ci_lo},
              {"ci_hi", l.ci_hi}};
}

json describe(const kis::DirectionalEstimate& d) {
  json sup = json::array();
  for (double s : d.shell_sup) sup.push_back(finite(s));
  return json{{"nu", d.nu},       {"se", d.se},          {"radii", d.radii},
              {"shell_sup", sup}, {"quotient", d.quotient}, {"skipped", d.skipped}};
}

json describe(const kis::RescaleReport& r) {
  return json{{"direct", describe(r.direct)},
              {"rescaled", describe(r.rescaled)},
              {"tolerance", r.tolerance},
              {"ok", r.ok}};
}

json describe(const kis::DirectionalIntegralReport& r) {
  json j{{"nu", r.nu},
         {"nu_lt_1", r.nu_lt_1},
         {"integral_converges", r.integral_converges},
         {"agree", r.agree},
         {"boundary", r.boundary},
         {"slope_e", finite(r.slope_e)},
         {"slope_se", finite(r.slope_se)}};
  if (r.tail_beta) j["tail_beta"] = *r.tail_beta;
  return j;
}

json describe(const bergman::BergmanModel& m) {
  json gram_re = json::array(), gram_im = json::array(), fac = json::array();
  const auto L = Eigen::MatrixXcd(m.factor.matrixL());
  for (Eigen::Index r = 0; r < m.gram.rows(); ++r) {
    json rr = json::array(), ri = json::array(), rf = json::array();
    for (Eigen::Index c = 0; c < m.gram.cols(); ++c) {
      rr.push_back(m.gram(r, c).real());
      ri.push_back(m.gram(r, c).imag());
      rf.push_back({L(r, c).real(), L(r, c).imag()});
    }
    gram_re.push_back(rr);
    gram_im.push_back(ri);
    fac.push_back(rf);
  }
  return json{{"center", cvec(m.center.coords)},
              {"m", m.m},
              {"degree", m.degree},
              {"radius", m.radius},
              {"dim", m.n},
              {"basis", m.basis},
              {"dropped", m.dropped},
              {"gram_re", gram_re},
              {"gram_im", gram_im},
              {"factor_l", fac},
              {"hermiticity_residual", m.hermiticity_residual},
              {"min_eigenvalue", m.min_eigenvalue},
              {"exact_quadrature", m.exact_quadrature},
              {"quadrature",
               {{"samples", m.quadrature.samples},
                {"shells", m.quadrature.shells},
                {"seed", m.quadrature.seed}}}};
}

json describe(const mc::PropertySuiteReport& r) {
  return json{{"nu1", describe(r.nu1)},
              {"nu2", describe(r.nu2)},
              {"nu_sum", describe(r.nu_sum)},
              {"nu_max", describe(r.nu_max)},
              {"slack", r.slack},
              {"subadditive_ok", r.subadditive_ok},
              {"max_ok", r.max_ok}};
}

json describe(const mc::BiholoReport& r) {
  return json{{"base", describe(r.base)},
              {"composed", describe(r.composed)},
              {"jacobian_abs", r.jacobian_abs},
              {"ok", r.ok}};
}

}  // namespace lelong
