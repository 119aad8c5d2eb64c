// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lelong/eval_plan.hpp"
#include "lelong/mc_engine.hpp"
#include "lelong/sampling.hpp"

namespace lelong {

WeightSpec WeightSpec::zero(int n) {
  WeightSpec w;
  w.kind = Kind::Radial;
  w.t = 0.0;
  w.center.coords.assign(n, cdouble(0.0));
  return w;
}

WeightSpec make_radial(double t, const ComplexPoint& a) {
  const int n = a.dim();
  if (n < 1) throw std::invalid_argument("make_radial: empty center");
  if (!(t >= 0.0) || !(t < n))
    throw std::invalid_argument("make_radial: t must lie in [0, n) for local integrability");
  WeightSpec w;
  w.kind = WeightSpec::Kind::Radial;
  w.t = t;
  w.center = a;
  w.params.l = t;
  w.params.M = t;
  w.params.tau = t > 0 ? std::min(0.5, 0.5 * (n / t - 1.0)) : 0.5;
  return w;
}

WeightSpec make_expr_weight(ExprPtr psi, const ComplexPoint& a,
                            const AdmissibilityParams& params) {
  if (!psi) throw std::invalid_argument("make_expr_weight: null expression");
  if (psi->arity() != a.dim()) throw std::invalid_argument("make_expr_weight: arity mismatch");
  if (!(params.tau > 0) || !(params.l > 0) || !(params.M > 0))
    throw std::invalid_argument("make_expr_weight: parameters must be positive");
  if (!(params.alpha > 0) || params.alpha > 1.0)
    throw std::invalid_argument("make_expr_weight: alpha in (0, 1]");
  WeightSpec w;
  w.kind = WeightSpec::Kind::Expr;
  w.expr = std::move(psi);
  w.center = a;
  w.params = params;
  return w;
}

namespace {

double eval_weight(const WeightSpec& w, std::span<const cdouble> x) {
  if (w.kind == WeightSpec::Kind::Radial) {
    double r2 = 0;
    for (const auto& c : x) r2 += std::norm(c);
    return r2 == 0.0 ? (w.t > 0 ? -std::numeric_limits<double>::infinity() : 0.0)
                     : 0.5 * w.t * std::log(r2);
  }
  return evaluate(*w.expr, x);
}

}  // namespace

AdmissibilityReport audit_admissibility(const WeightSpec& w, std::uint64_t seed, int samples) {
  AdmissibilityReport rep;
  rep.seed = seed;
  rep.samples = samples;
  const int n = w.dim();
  const auto& p = w.params;
  rep.radial_shortcut = w.kind == WeightSpec::Kind::Radial;

  // (i) decay exponent of the integral of e^{-2(1+tau) psi} on dyadic annuli
  {
    mc::PotentialSpec spec;
    spec.n = n;
    spec.split = mc::PotentialSpec::SplitOn::Total;
    spec.fixed_inv_s = 1.0 + p.tau;
    if (w.kind == WeightSpec::Kind::Radial) {
      spec.radial_t = 0.0;
      // psi = t log|x| goes through the scaled-potential slot
      spec.phi_set = true;
      spec.phi = EvalPlan(PshExpr::zero(n));
      spec.radial_t = w.t * (1.0 + p.tau);
    } else {
      spec.phi = EvalPlan(flatten(w.expr));
      spec.phi_set = true;
    }
    mc::EngineConfig cfg;
    cfg.seed = seed;
    cfg.n0 = std::max(1024, samples);
    cfg.k_min = 4;
    cfg.k_max = 20;
    mc::AnnulusEngine eng(std::move(spec), cfg);
    eng.run();
    auto sl = eng.slope(1.0 + p.tau);
    bool tail_bad = false;
    for (std::size_t i = eng.annuli().size() / 2; i < eng.annuli().size(); ++i)
      tail_bad = tail_bad || eng.log_mass(i, 1.0 + p.tau).divergent;
    rep.decay_exponent = sl.e;
    rep.decay_exponent_se = sl.se;
    rep.integrability_margin_ok = sl.e > 0.0 && !tail_bad;
    if (w.kind == WeightSpec::Kind::Radial)
      rep.decay_predicted = 2.0 * n - 2.0 * w.t * (1.0 + p.tau);
  }

  // shell statistics for (ii)-(iv)
  const int j_lo = 4, j_hi = 20;
  const std::size_t per_shell = std::max<std::size_t>(256, samples / 16);
  std::vector<double> sup_psi(j_hi - j_lo + 1, -std::numeric_limits<double>::infinity());
  std::vector<double> max_ratio(j_hi - j_lo + 1, -std::numeric_limits<double>::infinity());
  std::vector<double> hoelder_q(j_hi - j_lo + 1, 0.0);
  mc::Block blk, blk2;
  std::vector<cdouble> pt(n), pt2(n);
  for (int j = j_lo; j <= j_hi; ++j) {
    const double r = std::pow(2.0, -j);
    Rng rng(seed, {0x61756431ULL, static_cast<std::uint64_t>(j)});
    mc::sample_sphere(rng, n, r, per_shell, blk);
    mc::sample_sphere(rng, n, r * 0.75, per_shell, blk2);
    const double logr = std::log(r);
    double sup = -std::numeric_limits<double>::infinity();
    double ratio = -std::numeric_limits<double>::infinity();
    double hq = 0.0;
    for (std::size_t i = 0; i < per_shell; ++i) {
      for (int v = 0; v < n; ++v) {
        pt[v] = cdouble(blk.re[v][i], blk.im[v][i]);
        pt2[v] = cdouble(blk2.re[v][i], blk2.im[v][i]);
      }
      const double psi1 = eval_weight(w, pt);
      const double psi2 = eval_weight(w, pt2);
      sup = std::max(sup, psi1);
      if (std::isfinite(psi1)) ratio = std::max(ratio, psi1 / logr);
      // Hoelder quotient for pairs across nearby shells and against 0
      double d = 0;
      for (int v = 0; v < n; ++v) d += std::norm(pt[v] - pt2[v]);
      d = std::sqrt(d);
      const double e1 = std::exp(2.0 * psi1), e2 = std::exp(2.0 * psi2);
      if (d > 0) hq = std::max(hq, std::abs(e1 - e2) / std::pow(d, p.alpha));
      hq = std::max(hq, e1 / std::pow(r, p.alpha));
    }
    sup_psi[j - j_lo] = sup;
    max_ratio[j - j_lo] = ratio;
    hoelder_q[j - j_lo] = hq;
  }

  // (ii) psi >= M log|z| near 0 means psi/log|z| <= M on deep shells
  double worst = -std::numeric_limits<double>::infinity();
  for (int j = 8; j <= j_hi; ++j) worst = std::max(worst, max_ratio[j - j_lo]);
  rep.worst_ratio = worst;
  rep.lower_bound_ok = worst <= p.M * 1.05 + 0.05;

  // (iii) Hoelder: quotient must not blow up as shells shrink
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int j = j_lo; j <= j_hi; ++j) {
      const double q = hoelder_q[j - j_lo];
      if (!(q > 0) || !std::isfinite(q)) continue;
      sx += j;
      sy += std::log(q);
      sxx += static_cast<double>(j) * j;
      sxy += j * std::log(q);
      ++m;
    }
    rep.hoelder_quotient_shallow = hoelder_q[0];
    rep.hoelder_quotient_deep = hoelder_q[j_hi - j_lo];
    if (m >= 4) {
      rep.hoelder_trend = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      rep.hoelder_ok = rep.hoelder_trend < 0.05;
    }
  }

  // (iv) Lelong number from the shell sup slope against log r
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int j = 10; j <= j_hi; ++j) {
      const double s = sup_psi[j - j_lo];
      if (!std::isfinite(s)) continue;
      const double x = -static_cast<double>(j) * std::log(2.0);
      sx += x;
      sy += s;
      sxx += x * x;
      sxy += x * s;
      ++m;
    }
    if (m >= 4) {
      const double den = m * sxx - sx * sx;
      rep.lelong_estimate = (m * sxy - sx * sy) / den;
      double ss = 0;
      const double icpt = (sy - rep.lelong_estimate * sx) / m;
      for (int j = 10; j <= j_hi; ++j) {
        const double s = sup_psi[j - j_lo];
        if (!std::isfinite(s)) continue;
        const double x = -static_cast<double>(j) * std::log(2.0);
        const double r = s - (icpt + rep.lelong_estimate * x);
        ss += r * r;
      }
      rep.lelong_se = std::sqrt(std::max(ss / std::max(m - 2, 1), 1e-12) / den * m);
    }
  }

  if (rep.radial_shortcut) {
    // admissible by inspection; the measurements stay as evidence
    rep.lower_bound_ok = true;
    rep.hoelder_ok = true;
    rep.integrability_margin_ok = rep.decay_exponent > 0.0;
  }
  return rep;
}

}  // namespace lelong
