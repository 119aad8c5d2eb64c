// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "lelong/mc_engine.hpp"

namespace lelong::mc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

PolyMap translation(const ComplexPoint& a) {
  const int n = a.dim();
  std::vector<cdouble> eye(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) eye[static_cast<std::size_t>(i) * n + i] = 1.0;
  return PolyMap::linear(n, n, eye, a.coords);
}

PotentialSpec make_potential(const ExprPtr& expr, const WeightSpec& w, const ComplexPoint& a) {
  if (expr->arity() != a.dim()) throw std::invalid_argument("estimate: arity of expr vs center");
  if (w.dim() != expr->arity()) throw std::invalid_argument("estimate: arity of weight vs expr");
  PotentialSpec spec;
  spec.n = expr->arity();
  if (!expr->is_zero()) {
    bool shift = false;
    for (const auto& c : a.coords) shift = shift || c != cdouble(0.0);
    ExprPtr recentered = shift ? flatten(compose(expr, translation(a))) : flatten(expr);
    spec.phi = EvalPlan(recentered);
    spec.phi_set = true;
  }
  if (w.kind == WeightSpec::Kind::Radial) {
    spec.radial_t = w.t;
  } else {
    spec.psi = EvalPlan(flatten(w.expr));
    spec.psi_set = true;
  }
  spec.split = PotentialSpec::SplitOn::PhiOnly;
  return spec;
}

EngineConfig make_engine_config(const McConfig& cfg, std::uint64_t seed) {
  EngineConfig ec;
  ec.k_min = cfg.k_min;
  ec.k_max = cfg.k_max;
  ec.n0 = cfg.samples;
  ec.seed = seed;
  return ec;
}

}  // namespace

AnnulusProfile integral_profile(const ExprPtr& expr, const WeightSpec& w, double s, int k_min,
                                int k_max, std::size_t n_samples, std::uint64_t seed) {
  if (!(s > 0.0)) throw std::invalid_argument("integral_profile: s must be positive");
  if (k_min >= k_max) throw std::invalid_argument("integral_profile: k_min >= k_max");
  if (n_samples < 64) throw std::invalid_argument("integral_profile: need >= 64 samples");
  ComplexPoint a = w.center;
  if (a.dim() == 0) a.coords.assign(expr->arity(), cdouble(0.0));
  McConfig mcfg;
  mcfg.k_min = k_min;
  mcfg.k_max = k_max;
  mcfg.samples = n_samples;
  AnnulusEngine eng(make_potential(expr, w, a), make_engine_config(mcfg, seed));
  eng.run();

  AnnulusProfile p;
  p.k_min = k_min;
  p.k_max = k_max;
  p.s = s;
  p.seed = seed;
  const double inv_s = 1.0 / s;
  for (std::size_t i = 0; i < eng.annuli().size(); ++i) {
    auto m = eng.mom_mass(i, inv_s);
    p.masses.push_back(m.value);
    p.stderrs.push_back(m.se);
    p.clipped.push_back(m.clipped + eng.annuli()[i].clipped);
    p.band_fraction.push_back(m.band_fraction);
    p.divergent.push_back(m.divergent ? 1 : 0);
  }
  if (auto tr = eng.tail_rate()) {
    p.tail_beta = tr->beta;
    p.tail_beta_se = tr->se;
  }
  return p;
}

DivergenceExponent divergence_exponent(const AnnulusProfile& profile) {
  DivergenceExponent out;
  const std::size_t nk = profile.masses.size();
  if (nk < 6) throw std::invalid_argument("divergence_exponent: need at least 6 annuli");

  bool all_zero = true;
  for (double m : profile.masses) all_zero = all_zero && m == 0.0;
  if (all_zero) {
    out.e = kInf;
    out.flagged = true;
    out.flag = "all-zero masses";
    return out;
  }
  for (std::size_t i = 0; i < nk; ++i) {
    if (profile.divergent[i] || !std::isfinite(profile.masses[i])) {
      out.e = -kInf;
      out.flagged = true;
      out.flag = "annulus mass diverges";
      return out;
    }
  }
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  int used = 0;
  for (std::size_t i = 0; i < nk; ++i) {
    if (!(profile.masses[i] > 0.0)) continue;
    const double x = profile.k_min + static_cast<double>(i);
    const double y = -std::log2(profile.masses[i]);
    const double rel = profile.stderrs[i] / profile.masses[i];
    const double se = std::clamp(rel / std::log(2.0), 0.03, 1.5) +
                      (profile.band_fraction[i] > 0.5 ? 0.25 : 0.0);
    const double wgt = 1.0 / (se * se);
    sw += wgt;
    swx += wgt * x;
    swy += wgt * y;
    swxx += wgt * x * x;
    swxy += wgt * x * y;
    ++used;
  }
  if (used < 6) {
    out.flagged = true;
    out.flag = "too few positive masses";
    out.e = 0.0;
    out.se = kInf;
    return out;
  }
  const double den = sw * swxx - swx * swx;
  out.e = (sw * swxy - swx * swy) / den;
  const double icpt = (swy - out.e * swx) / sw;
  double ss = 0;
  for (std::size_t i = 0; i < nk; ++i) {
    if (!(profile.masses[i] > 0.0)) continue;
    const double x = profile.k_min + static_cast<double>(i);
    const double y = -std::log2(profile.masses[i]);
    const double rel = profile.stderrs[i] / profile.masses[i];
    const double se = std::clamp(rel / std::log(2.0), 0.03, 1.5) +
                      (profile.band_fraction[i] > 0.5 ? 0.25 : 0.0);
    const double r = y - (icpt + out.e * x);
    ss += r * r / (se * se);
  }
  out.se = std::sqrt(std::max(ss / std::max(used - 2, 1) * sw / den, 1e-12));
  return out;
}

ThresholdEstimate estimate_threshold(const ExprPtr& expr, const WeightSpec& w,
                                     const ComplexPoint& a, std::pair<double, double> bracket,
                                     double tol, std::uint64_t seed, const McConfig& cfg) {
  auto [s_lo, s_hi] = bracket;
  if (!(s_lo > 0) || !(s_lo < s_hi)) throw std::invalid_argument("estimate_threshold: bad bracket");
  if (!(tol > 0)) throw std::invalid_argument("estimate_threshold: tol must be positive");

  ThresholdEstimate est;
  est.seed = seed;

  AnnulusEngine eng(make_potential(expr, w, a), make_engine_config(cfg, seed));
  eng.run();

  // cross-sectional component from the potential tail rate
  if (auto tr = eng.tail_rate()) {
    est.tail_nu = 2.0 / tr->beta;
    est.tail_se = 2.0 * tr->se / (tr->beta * tr->beta);
  }

  // radial component: bisection on the sign of the fitted decay exponent
  auto probe = [&](double s) {
    auto sl = eng.slope(1.0 / s);
    est.bisection_trace.push_back(s);
    est.exponent_curve.push_back({s, sl.e, sl.se});
    return sl;
  };
  auto divergent_at = [&](const AnnulusEngine::Slope& sl) {
    return sl.any_divergent || sl.e <= 0.0;  // tie counts as divergent
  };

  double lo = s_lo, hi = s_hi;
  auto sl_hi = probe(hi);
  bool have_root = true;
  if (divergent_at(sl_hi)) {
    est.warnings.push_back("threshold at or above bracket top");
    est.radial_root = hi;
    est.radial_se = 0.0;
    have_root = false;
  } else {
    auto sl_lo = probe(lo);
    if (!divergent_at(sl_lo)) {
      est.warnings.push_back("no divergence at bracket bottom; radial component set to 0");
      est.radial_root = 0.0;
      est.radial_se = 0.0;
      have_root = false;
    }
  }
  if (have_root) {
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (divergent_at(probe(mid)))
        lo = mid;
      else
        hi = mid;
    }
    est.radial_root = 0.5 * (lo + hi);
    // refine by a local weighted fit of e(s) near the crossing
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    int m = 0;
    for (const auto& [s, e, se] : est.exponent_curve) {
      if (!std::isfinite(e) || !std::isfinite(se)) continue;
      if (std::abs(s - est.radial_root) > std::max(0.35 * est.radial_root, 4.0 * tol)) continue;
      const double wgt = 1.0 / (se * se + 1e-6);
      sw += wgt;
      swx += wgt * s;
      swy += wgt * e;
      swxx += wgt * s * s;
      swxy += wgt * s * e;
      ++m;
    }
    const double den = sw * swxx - swx * swx;
    if (m >= 3 && den > 1e-12) {
      const double b = (sw * swxy - swx * swy) / den;
      const double c0 = (swy - b * swx) / sw;
      if (b > 1e-9) {
        const double root = -c0 / b;
        if (root > lo - 4 * tol && root < hi + 4 * tol) {
          est.radial_root = std::clamp(root, s_lo, s_hi);
          double se_near = 0.2;
          for (const auto& [s, e, se] : est.exponent_curve)
            if (std::abs(s - est.radial_root) < 4 * tol) se_near = std::min(se_near, se);
          est.radial_se = se_near / b;
        }
      }
    }
    if (est.radial_se == 0.0) est.radial_se = tol;
  }

  const double tail = est.tail_nu.value_or(0.0);
  est.nu_hat = std::max(est.radial_root, tail);

  const double rad_lo = have_root ? est.radial_root - 1.96 * est.radial_se - tol
                                  : (est.radial_root > 0 ? est.radial_root : 0.0);
  const double rad_hi = have_root ? est.radial_root + 1.96 * est.radial_se + tol
                                  : (est.radial_root > 0 ? kInf : 0.0);
  const double tail_lo = est.tail_nu ? tail - 1.96 * est.tail_se - 0.01 : 0.0;
  const double tail_hi = est.tail_nu ? tail + 1.96 * est.tail_se + 0.01 : 0.0;
  est.ci_lo = std::max(0.0, std::max(rad_lo, tail_lo));
  est.ci_hi = std::max(rad_hi, tail_hi);
  if (est.ci_hi < est.nu_hat) est.ci_hi = est.nu_hat;
  if (est.ci_lo > est.nu_hat) est.ci_lo = est.nu_hat;

  long clipped = 0;
  for (const auto& r : eng.annuli()) clipped += r.clipped;
  if (clipped > 0)
    est.warnings.push_back("clipped evaluations: " + std::to_string(clipped));
  std::sort(est.exponent_curve.begin(), est.exponent_curve.end(),
            [](const auto& x, const auto& y) { return x[0] < y[0]; });
  return est;
}

ThresholdEstimate estimate_threshold(const ExprPtr& expr, const WeightSpec& w,
                                     const ComplexPoint& a, std::uint64_t seed,
                                     const McConfig& cfg) {
  return estimate_threshold(expr, w, a, {cfg.s_lo, cfg.s_hi}, cfg.tol, seed, cfg);
}

PropertySuiteReport hoelder_property_suite(const ExprPtr& e1, const ExprPtr& e2,
                                           const WeightSpec& w, std::uint64_t seed,
                                           const McConfig& cfg) {
  if (e1->arity() != e2->arity())
    throw std::invalid_argument("hoelder_property_suite: arity mismatch");
  ComplexPoint a;
  a.coords.assign(e1->arity(), cdouble(0.0));
  PropertySuiteReport rep;
  rep.nu1 = estimate_threshold(e1, w, a, seed, cfg);
  rep.nu2 = estimate_threshold(e2, w, a, seed + 1, cfg);
  rep.nu_sum = estimate_threshold(PshExpr::sum({e1, e2}), w, a, seed + 2, cfg);
  rep.nu_max = estimate_threshold(PshExpr::max({e1, e2}), w, a, seed + 3, cfg);
  auto width = [](const ThresholdEstimate& t) { return t.ci_hi - t.ci_lo; };
  rep.slack = width(rep.nu1) + width(rep.nu2) + std::max(width(rep.nu_sum), width(rep.nu_max));
  rep.subadditive_ok = rep.nu_sum.nu_hat <= rep.nu1.nu_hat + rep.nu2.nu_hat + rep.slack;
  rep.max_ok = rep.nu_max.nu_hat >= std::min(rep.nu1.nu_hat, rep.nu2.nu_hat) - rep.slack;
  return rep;
}

BiholoReport biholo_invariance_check(const ExprPtr& expr, const PolyMap& f, double t,
                                     std::uint64_t seed, const McConfig& cfg) {
  const int n = expr->arity();
  if (f.n_out() != n || f.n_in != n)
    throw std::invalid_argument("biholo_invariance_check: map must be n -> n");
  // Jacobian at 0 is the coefficient matrix of the degree-1 terms
  std::vector<std::vector<cdouble>> J(n, std::vector<cdouble>(n, 0.0));
  for (int r = 0; r < n; ++r)
    for (const auto& mono : f.comps[r].terms()) {
      int deg = 0, var = -1;
      for (int v = 0; v < n; ++v) {
        deg += mono.exps[v];
        if (mono.exps[v] == 1) var = v;
      }
      if (deg == 1) J[r][var] += mono.coeff;
    }
  // determinant by Gaussian elimination
  cdouble det(1.0);
  {
    auto Jc = J;
    for (int c = 0; c < n; ++c) {
      int piv = -1;
      double best = 0;
      for (int r = c; r < n; ++r)
        if (std::abs(Jc[r][c]) > best) {
          best = std::abs(Jc[r][c]);
          piv = r;
        }
      if (piv < 0 || best < 1e-12) {
        det = 0.0;
        break;
      }
      if (piv != c) {
        std::swap(Jc[piv], Jc[c]);
        det = -det;
      }
      det *= Jc[c][c];
      for (int r = c + 1; r < n; ++r) {
        cdouble fac = Jc[r][c] / Jc[c][c];
        for (int cc = c; cc < n; ++cc) Jc[r][cc] -= fac * Jc[c][cc];
      }
    }
  }
  BiholoReport rep;
  rep.jacobian_abs = std::abs(det);
  if (rep.jacobian_abs < 1e-10)
    throw std::invalid_argument("biholo_invariance_check: singular Jacobian at 0");

  ComplexPoint origin;
  origin.coords.assign(n, cdouble(0.0));
  WeightSpec w = make_radial(t, origin);
  rep.base = estimate_threshold(expr, w, origin, seed, cfg);
  rep.composed = estimate_threshold(compose(expr, f), w, origin, seed + 1, cfg);
  const double diff = std::abs(rep.base.nu_hat - rep.composed.nu_hat);
  const double slack =
      (rep.base.ci_hi - rep.base.ci_lo) + (rep.composed.ci_hi - rep.composed.ci_lo);
  rep.ok = diff <= std::max(slack, 0.02);
  return rep;
}

std::vector<LevelsetPoint> levelset_scan(const ExprPtr& expr, const WeightSpec& w,
                                         const std::vector<ComplexPoint>& grid, double c,
                                         std::uint64_t seed, const McConfig& cfg) {
  if (grid.empty()) throw std::invalid_argument("levelset_scan: empty grid");
  if (!(c > 0)) throw std::invalid_argument("levelset_scan: level must be positive");
  std::vector<LevelsetPoint> out;
  out.reserve(grid.size());
  std::uint64_t i = 0;
  for (const auto& g : grid) {
    WeightSpec wg = w;
    wg.center = g;
    ThresholdEstimate e = estimate_threshold(expr, wg, g, hash_stream(seed, {i++}), cfg);
    out.push_back({g, e.nu_hat, e.nu_hat >= c});
  }
  return out;
}

}  // namespace lelong::mc
