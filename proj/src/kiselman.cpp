// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/kiselman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lelong/eval_plan.hpp"
#include "lelong/mc_engine.hpp"
#include "lelong/sampling.hpp"

namespace lelong::kis {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DirectionSpec DirectionSpec::from_values(std::vector<double> dirs) {
  bool positive = false;
  for (double a : dirs) {
    if (a < 0) throw std::invalid_argument("DirectionSpec: negative direction");
    positive = positive || a > 0;
  }
  if (!positive) throw std::invalid_argument("DirectionSpec: needs a positive direction");
  DirectionSpec d;
  d.a_dirs = std::move(dirs);
  return d;
}

DirectionSpec DirectionSpec::rational(std::vector<int> p, int q) {
  if (q < 1) throw std::invalid_argument("DirectionSpec: q >= 1");
  DirectionSpec d;
  for (int pi : p) {
    if (pi < 1) throw std::invalid_argument("DirectionSpec: p_i >= 1");
    d.a_dirs.push_back(static_cast<double>(pi) / q);
  }
  d.rational_form = {std::move(p), q};
  return d;
}

DirectionalEstimate directional_nu(const ExprPtr& expr, const ComplexPoint& w,
                                   const DirectionSpec& dirs, const std::vector<double>& radii,
                                   std::size_t samples_per_shell, std::uint64_t seed) {
  const int n = expr->arity();
  if (dirs.dim() != n || w.dim() != n) throw std::invalid_argument("directional_nu: arity");
  if (radii.size() < 6) throw std::invalid_argument("directional_nu: need >= 6 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1])) throw std::invalid_argument("directional_nu: radii must decrease");

  const auto& K = kern::active();
  EvalPlan plan(flatten(expr));
  DirectionalEstimate est;
  mc::Block blk;
  std::vector<double> vals;
  EvalPlan::Workspace ws;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double r = radii[j];
    std::vector<double> rho(n);
    for (int v = 0; v < n; ++v) rho[v] = std::pow(r, dirs.a_dirs[v]);
    mc::sample_torus(hash_stream(seed, {0x6b697331ULL, j}), rho, samples_per_shell, blk);
    // shift the torus to w
    for (int v = 0; v < n; ++v) {
      if (w.coords[v] == cdouble(0.0)) continue;
      for (std::size_t i = 0; i < blk.padded_count(); ++i) {
        blk.re[v][i] += w.coords[v].real();
        blk.im[v][i] += w.coords[v].imag();
      }
    }
    const std::size_t np = blk.padded_count();
    vals.assign(np, -kInf);
    auto re = blk.re_ptrs();
    auto im = blk.im_ptrs();
    plan.run(re.data(), im.data(), vals.data(), np, ws);
    for (std::size_t i = blk.count; i < np; ++i) vals[i] = -kInf;  // padding lanes
    const double sup = K.reduce_max(vals.data(), np);
    est.radii.push_back(r);
    if (!std::isfinite(sup)) {
      est.skipped.push_back(static_cast<int>(j));
      est.shell_sup.push_back(-kInf);
      est.quotient.push_back(0.0);
      continue;
    }
    est.shell_sup.push_back(sup);
    est.quotient.push_back(sup / std::log(r));
  }

  // slope fit over the six smallest usable shells
  std::vector<std::pair<double, double>> pts;  // (log r, sup)
  for (std::size_t j = radii.size(); j-- > 0;) {
    if (std::isfinite(est.shell_sup[j])) pts.push_back({std::log(radii[j]), est.shell_sup[j]});
    if (pts.size() == 6) break;
  }
  if (pts.size() < 3) throw std::runtime_error("directional_nu: too few usable shells");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(pts.size());
  const double den = m * sxx - sx * sx;
  est.nu = (m * sxy - sx * sy) / den;
  double ss = 0;
  const double icpt = (sy - est.nu * sx) / m;
  for (auto& [x, y] : pts) {
    const double r = y - (icpt + est.nu * x);
    ss += r * r;
  }
  est.se = std::sqrt(std::max(ss / std::max(m - 2.0, 1.0), 1e-16) / den * m);
  return est;
}

DirectionalEstimate directional_nu(const ExprPtr& expr, const ComplexPoint& w,
                                   const DirectionSpec& dirs, std::uint64_t seed) {
  std::vector<double> radii;
  for (int j = 4; j <= 14; ++j) radii.push_back(std::pow(2.0, -j));
  return directional_nu(expr, w, dirs, radii, 4096, seed);
}

RescaleReport rescale_identity_check(const ExprPtr& expr, const std::vector<int>& p, int q,
                                     std::uint64_t seed) {
  const int n = expr->arity();
  if (static_cast<int>(p.size()) != n) throw std::invalid_argument("rescale: arity");
  RescaleReport rep;
  ComplexPoint origin;
  origin.coords.assign(n, cdouble(0.0));

  rep.direct = directional_nu(expr, origin, DirectionSpec::rational(p, q), seed);
  ExprPtr substituted = flatten(compose(expr, PolyMap::coordinate_powers(p)));
  DirectionSpec ones = DirectionSpec::rational(std::vector<int>(n, 1), 1);
  rep.rescaled = directional_nu(substituted, origin, ones, seed + 1);
  rep.rescaled.nu /= q;
  rep.rescaled.se /= q;
  rep.tolerance = 2.0 * (rep.direct.se + rep.rescaled.se) + 0.02;
  rep.ok = std::abs(rep.direct.nu - rep.rescaled.nu) <= rep.tolerance;
  return rep;
}

DirectionalIntegralReport directional_integral_check(const ExprPtr& expr,
                                                     const DirectionSpec& dirs,
                                                     const geom::UnitaryMatrix* rotation,
                                                     std::uint64_t seed) {
  if (!dirs.rational_form)
    throw std::invalid_argument("directional_integral_check: rational directions required");
  const int n = expr->arity();
  if (dirs.dim() != n) throw std::invalid_argument("directional_integral_check: arity");
  const auto& [p, q] = *dirs.rational_form;

  ExprPtr rotated = expr;
  if (rotation) {
    if (rotation->n != n) throw std::invalid_argument("directional_integral_check: rotation size");
    rotated = flatten(compose(expr, PolyMap::linear(n, n, rotation->entries)));
  }

  DirectionalIntegralReport rep;
  ComplexPoint origin;
  origin.coords.assign(n, cdouble(0.0));
  auto est = directional_nu(rotated, origin, dirs, seed);
  rep.nu = est.nu;
  rep.nu_lt_1 = est.nu < 1.0;
  rep.boundary = std::abs(est.nu - 1.0) <= std::max(0.05, 2.0 * est.se);

  // integral exp(-2 phi_rot / q - 2 sum (1 - 1/(n p_i)) log|z_i|)
  mc::PotentialSpec spec;
  spec.n = n;
  if (!rotated->is_zero()) {
    spec.phi = EvalPlan(rotated);
    spec.phi_set = true;
  }
  spec.coord_log.assign(n, 0.0);
  for (int v = 0; v < n; ++v) spec.coord_log[v] = 1.0 - 1.0 / (static_cast<double>(n) * p[v]);
  spec.split = mc::PotentialSpec::SplitOn::Total;
  spec.fixed_inv_s = 1.0 / q;
  mc::EngineConfig ec;
  ec.seed = hash_stream(seed, {0x6b697369ULL});
  mc::AnnulusEngine eng(std::move(spec), ec);
  eng.run();
  auto sl = eng.slope(1.0 / q);
  rep.slope_e = sl.e;
  rep.slope_se = sl.se;
  bool tail_divergent = false;
  for (std::size_t i = eng.annuli().size() / 2; i < eng.annuli().size(); ++i)
    tail_divergent = tail_divergent || eng.log_mass(i, 1.0 / q).divergent;
  if (auto tr = eng.tail_rate()) rep.tail_beta = tr->beta;
  rep.integral_converges = !tail_divergent && sl.e > 0.0;
  rep.agree = rep.nu_lt_1 == rep.integral_converges;
  return rep;
}

}  // namespace lelong::kis
