// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lelong/threads.hpp"

namespace lelong::mc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPotClamp = 1e9;

double clampp(double x, long& clipped) {
  if (std::isnan(x) || x > kPotClamp) {
    ++clipped;
    return kPotClamp;
  }
  if (x < -kPotClamp) {
    ++clipped;
    return -kPotClamp;
  }
  return x;
}

// standard normal via the same inverse-CDF rational approximation the
// kernels use; keeps chain moves reproducible everywhere
double normal_draw(Rng& rng) {
  double u = rng.next_double() * 0.999999 + 5e-7;
  double q = u - 0.5;
  if (std::abs(q) <= 0.425) {
    double r = 0.180625 - q * q;
    double num = ((((( -3.969683028665376e+01 * r + 2.209460984245205e+02) * r -
                      2.759285104469687e+02) * r + 1.383577518672690e+02) * r -
                    3.066479806614716e+01) * r + 2.506628277459239e+00);
    double den = ((((( -5.447609879822406e+01 * r + 1.615858368580409e+02) * r -
                      1.556989798598866e+02) * r + 6.680131188771972e+01) * r -
                    1.328068155288572e+01) * r + 1.0);
    return q * num / den;
  }
  double p = q < 0 ? u : 1.0 - u;
  double s = std::sqrt(-2.0 * std::log(p));
  double num = (((( -7.784894002430293e-03 * s - 3.223964580411365e-01) * s -
                   2.400758277161838e+00) * s - 2.549732539343734e+00) * s +
                 4.374664141464968e+00) * s + 2.938163982698783e+00;
  double den = (((7.784695709041462e-03 * s + 3.224671290700398e-01) * s +
                 2.445134137142996e+00) * s + 3.754408661907416e+00) * s + 1.0;
  double x = num / den;
  return q < 0 ? x : -x;
}

double lse_pair(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

AnnulusEngine::AnnulusEngine(PotentialSpec spec, EngineConfig cfg)
    : spec_(std::move(spec)), cfg_(cfg) {
  if (cfg_.k_min >= cfg_.k_max) throw std::invalid_argument("AnnulusEngine: k_min >= k_max");
  if (cfg_.n0 < 64) throw std::invalid_argument("AnnulusEngine: need at least 64 samples");
  if (spec_.n < 1 || spec_.n > 16) throw std::invalid_argument("AnnulusEngine: dimension 1..16");
  if (!spec_.coord_log.empty() && static_cast<int>(spec_.coord_log.size()) != spec_.n)
    throw std::invalid_argument("AnnulusEngine: coord_log size mismatch");
}

void AnnulusEngine::eval_AB(const Block& blk, std::vector<double>& A, std::vector<double>& B,
                            long& clipped) const {
  const auto& K = kern::active();
  const std::size_t np = blk.padded_count();
  A.assign(np, 0.0);
  B.assign(np, 0.0);

  static thread_local EvalPlan::Workspace ws;
  auto re = blk.re_ptrs();
  auto im = blk.im_ptrs();
  if (spec_.phi_set) spec_.phi.run(re.data(), im.data(), A.data(), np, ws);
  if (spec_.psi_set) {
    std::vector<double> tmp(np);
    spec_.psi.run(re.data(), im.data(), tmp.data(), np, ws);
    K.vadd(B.data(), tmp.data(), np);
  }
  if (spec_.radial_t != 0.0) {
    std::vector<double> lr(np);
    K.vlog(blk.radius.data(), lr.data(), np);
    for (std::size_t i = 0; i < np; ++i) B[i] += spec_.radial_t * lr[i];
  }
  if (!spec_.coord_log.empty()) {
    std::vector<double> tmp(np);
    for (int v = 0; v < spec_.n; ++v) {
      if (spec_.coord_log[v] == 0.0) continue;
      K.vlogabs2(blk.re[v].data(), blk.im[v].data(), 0.5 * spec_.coord_log[v], tmp.data(), np);
      K.vadd(B.data(), tmp.data(), np);
    }
  }
  A.resize(blk.count);
  B.resize(blk.count);
  for (std::size_t i = 0; i < blk.count; ++i) {
    A[i] = clampp(A[i], clipped);
    B[i] = clampp(B[i], clipped);
  }
}

double AnnulusEngine::potential_U(double A, double B) const {
  return spec_.split == PotentialSpec::SplitOn::PhiOnly ? -A : -(A * spec_.fixed_inv_s + B);
}

void AnnulusEngine::run() {
  const std::size_t nk = static_cast<std::size_t>(cfg_.k_max - cfg_.k_min + 1);
  runs_.assign(nk, {});
  parallel_for(nk, [this](std::size_t i) { run_annulus(i); });
}

void AnnulusEngine::run_annulus(std::size_t idx) {
  AnnulusRun& run = runs_[idx];
  const int n = spec_.n;
  const int k = cfg_.k_min + static_cast<int>(idx);
  const double r_hi = cfg_.radius_base * std::pow(2.0, -k);
  const double r_lo = 0.5 * r_hi;
  run.k = k;
  run.log_vol = log_annulus_volume(n, r_lo, r_hi);

  // level 0: uniform batches, coordinates kept as splitting seeds
  const std::size_t per_batch = cfg_.n0 / cfg_.batches;
  const std::size_t n0 = per_batch * cfg_.batches;
  run.pts0.resize(n, n0);
  run.A0.reserve(n0);
  run.B0.reserve(n0);
  run.U0.reserve(n0);
  Block blk;
  std::vector<double> A, B;
  for (int b = 0; b < cfg_.batches; ++b) {
    Rng rng(cfg_.seed, {0x4c30ULL, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(b)});
    sample_annulus(rng, n, r_lo, r_hi, per_batch, blk);
    eval_AB(blk, A, B, run.clipped);
    for (std::size_t i = 0; i < per_batch; ++i) {
      const std::size_t dst = run.A0.size();
      run.A0.push_back(A[i]);
      run.B0.push_back(B[i]);
      run.U0.push_back(potential_U(A[i], B[i]));
      for (int v = 0; v < n; ++v) {
        run.pts0.re[v][dst] = blk.re[v][i];
        run.pts0.im[v][dst] = blk.im[v][i];
      }
      run.pts0.radius[dst] = blk.radius[i];
    }
  }

  // splitting trigger: skip when the potential has no upper tail to chase
  {
    std::vector<double> us = run.U0;
    std::sort(us.begin(), us.end());
    const double u_med = us[us.size() / 2];
    const double u_q = us[static_cast<std::size_t>((1.0 - cfg_.q) * us.size())];
    if (!(u_q - u_med > 1e-9)) {
      run.cap = us.back();
      return;
    }
  }

  const std::size_t M = cfg_.chains;
  const double p2n = 2.0 * n;
  const double lo_p = std::pow(r_lo, p2n), hi_p = std::pow(r_hi, p2n);

  Block cur, prop;
  cur.resize(n, M);
  prop.resize(n, M);
  std::vector<double> curA(M), curB(M), curU(M), pA, pB, pU(M);

  // candidate pool: level 0 first, then the chain states of each level
  std::vector<double> poolU = run.U0;
  Block poolPts = run.pts0;

  double sigma = 0.5, lsig = 0.5;
  double logP = 0.0;
  int stall = 0, low_acc_streak = 0;
  double last_acc = 1.0;
  std::vector<double> thresholds;

  auto median_du = [&](std::size_t from, std::size_t to) {
    std::vector<double> d;
    for (std::size_t i = std::max<std::size_t>(from, 1); i < std::min(to, thresholds.size()); ++i)
      d.push_back(thresholds[i] - thresholds[i - 1]);
    if (d.empty()) return 0.0;
    std::sort(d.begin(), d.end());
    return d[d.size() / 2];
  };

  bool budget_exhausted = true;
  for (int lev = 0; lev < cfg_.max_levels; ++lev) {
    std::vector<double> us = poolU;
    std::sort(us.begin(), us.end());
    double u_next = us[static_cast<std::size_t>((1.0 - cfg_.q) * us.size())];

    // spacing of the early levels is the reference scale: an unbounded
    // exponential tail keeps that spacing, a capped potential collapses it
    const double early_du = median_du(3, 13);
    if (thresholds.size() >= 4 && early_du > 0) {
      if (u_next - thresholds.back() < 0.02 * early_du && last_acc > 0.15) {
        if (++stall >= 2) {
          run.cap = thresholds.back();
          budget_exhausted = false;
          break;
        }
      } else {
        stall = 0;
      }
    }

    std::vector<std::size_t> sel;
    for (std::size_t j = 0; j < poolU.size(); ++j)
      if (poolU[j] >= u_next) sel.push_back(j);
    if (sel.size() < 8) break;
    for (std::size_t c = 0; c < M; ++c) {
      const std::size_t j = sel[c % sel.size()];
      for (int v = 0; v < n; ++v) {
        cur.re[v][c] = poolPts.re[v][j];
        cur.im[v][c] = poolPts.im[v][j];
      }
      cur.radius[c] = poolPts.radius[j];
    }
    eval_AB(cur, curA, curB, run.clipped);
    for (std::size_t c = 0; c < M; ++c) curU[c] = potential_U(curA[c], curB[c]);

    Band band;
    band.u_lo = u_next;
    if (cfg_.store_points) {
      band.re.assign(n, {});
      band.im.assign(n, {});
    }
    Rng rng(cfg_.seed, {0x4c4cULL, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(lev)});
    double acc_sum = 0.0;
    const int record_from = cfg_.steps / 2;
    const std::size_t stride =
        std::max<std::size_t>(1, (M * (cfg_.steps - record_from) + cfg_.band_cap - 1) / cfg_.band_cap);
    for (int t = 0; t < cfg_.steps; ++t) {
      std::vector<char> kindB(M), ok(M, 1);
      std::vector<double> jac(M, 1.0);
      for (std::size_t c = 0; c < M; ++c) {
        kindB[c] = rng.next_double() < 0.5 ? 1 : 0;
        if (!kindB[c]) {
          // sphere bump plus reflected radius-percentile walk
          double dir[32];
          double nrm2 = 0.0;
          for (int v = 0; v < n; ++v) {
            dir[2 * v] = cur.re[v][c] / cur.radius[c] + sigma * normal_draw(rng);
            dir[2 * v + 1] = cur.im[v][c] / cur.radius[c] + sigma * normal_draw(rng);
            nrm2 += dir[2 * v] * dir[2 * v] + dir[2 * v + 1] * dir[2 * v + 1];
          }
          const double nrm = std::sqrt(std::max(nrm2, 1e-300));
          const double p_old = (std::pow(cur.radius[c], p2n) - lo_p) / (hi_p - lo_p);
          double p_new = std::fmod(std::abs(p_old + 0.3 * normal_draw(rng)), 2.0);
          if (p_new > 1.0) p_new = 2.0 - p_new;
          const double r_new = std::pow(lo_p + p_new * (hi_p - lo_p), 1.0 / p2n);
          for (int v = 0; v < n; ++v) {
            prop.re[v][c] = dir[2 * v] / nrm * r_new;
            prop.im[v][c] = dir[2 * v + 1] / nrm * r_new;
          }
          prop.radius[c] = r_new;
        } else {
          // single-coordinate log-modulus + phase move; Jacobian |z'|^2/|z|^2
          const int ci = static_cast<int>(rng.next_below(n));
          const double sc = std::exp(lsig * normal_draw(rng));
          const double th = 0.4 * normal_draw(rng);
          const double cth = std::cos(th), sth = std::sin(th);
          double r2 = 0.0;
          for (int v = 0; v < n; ++v) {
            double zr = cur.re[v][c], zi = cur.im[v][c];
            if (v == ci) {
              const double nr = sc * (zr * cth - zi * sth);
              const double ni = sc * (zr * sth + zi * cth);
              zr = nr;
              zi = ni;
            }
            prop.re[v][c] = zr;
            prop.im[v][c] = zi;
            r2 += zr * zr + zi * zi;
          }
          prop.radius[c] = std::sqrt(r2);
          jac[c] = sc * sc;
          ok[c] = (prop.radius[c] >= r_lo && prop.radius[c] <= r_hi) ? 1 : 0;
        }
      }
      eval_AB(prop, pA, pB, run.clipped);
      long accA = 0, accB = 0, cntA = 0, cntB = 0;
      for (std::size_t c = 0; c < M; ++c) {
        pU[c] = potential_U(pA[c], pB[c]);
        bool pass = pU[c] >= u_next;
        if (kindB[c]) pass = pass && ok[c] && rng.next_double() < std::min(1.0, jac[c]);
        (kindB[c] ? cntB : cntA) += 1;
        if (pass) {
          (kindB[c] ? accB : accA) += 1;
          for (int v = 0; v < n; ++v) {
            cur.re[v][c] = prop.re[v][c];
            cur.im[v][c] = prop.im[v][c];
          }
          cur.radius[c] = prop.radius[c];
          curA[c] = pA[c];
          curB[c] = pB[c];
          curU[c] = pU[c];
        }
      }
      const double arA = cntA > 0 ? static_cast<double>(accA) / cntA : 0.3;
      const double arB = cntB > 0 ? static_cast<double>(accB) / cntB : 0.3;
      acc_sum += static_cast<double>(accA + accB) / static_cast<double>(M);
      sigma = std::clamp(sigma * std::exp(0.5 * (arA - 0.3)), 1e-14, 1.0);
      lsig = std::clamp(lsig * std::exp(0.5 * (arB - 0.3)), 1e-14, 4.0);
      if (t >= record_from) {
        for (std::size_t c = 0; c < M && band.A.size() < cfg_.band_cap; c += stride) {
          band.A.push_back(curA[c]);
          band.B.push_back(curB[c]);
          band.U.push_back(curU[c]);
          if (cfg_.store_points) {
            for (int v = 0; v < n; ++v) {
              band.re[v].push_back(cur.re[v][c]);
              band.im[v].push_back(cur.im[v][c]);
            }
          }
        }
      }
    }
    last_acc = acc_sum / cfg_.steps;
    if (last_acc < 0.02) {
      if (++low_acc_streak >= 3) break;
    } else {
      low_acc_streak = 0;
    }

    logP += std::log(cfg_.q);
    band.logP = logP;
    thresholds.push_back(u_next);
    run.bands.push_back(std::move(band));
    run.levels = lev + 1;

    poolU.assign(curU.begin(), curU.end());
    poolPts = cur;
  }

  // a run that burned the whole budget with collapsing spacing is a cap the
  // stall rule did not quite reach
  if (budget_exhausted && !run.cap && thresholds.size() >= 16) {
    const double early_du = median_du(3, 13);
    if (early_du > 0 &&
        median_du(thresholds.size() - 8, thresholds.size()) < 0.25 * early_du)
      run.cap = thresholds.back();
  }

  // tail rate from the early, well-mixed levels: log P(U > u_l) = l log q
  const std::size_t lo = 3;
  const std::size_t hi = std::min<std::size_t>(thresholds.size(), 11);
  if (!run.cap && hi >= lo + 4) {
    const double lq = std::log(cfg_.q);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double m = 0;
    for (std::size_t l = lo; l < hi; ++l) {
      const double x = thresholds[l];
      const double y = static_cast<double>(l + 1) * lq;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      m += 1;
    }
    const double den = m * sxx - sx * sx;
    if (den > 1e-12) {
      const double sl = (m * sxy - sx * sy) / den;
      if (sl < -1e-9) {
        run.beta = -sl;
        double ss = 0;
        for (std::size_t l = lo; l < hi; ++l) {
          const double pred = (sy - sl * sx) / m + sl * thresholds[l];
          const double r = static_cast<double>(l + 1) * lq - pred;
          ss += r * r;
        }
        const double se = std::sqrt(std::max(ss / std::max(m - 2, 1.0), 1e-12) / den * m) * 3.0;
        run.beta_se = std::max(se, 0.01 * *run.beta);
      }
    }
  }
}

namespace {
// log of (1/denom) sum over the subset {U < u_hi} of exp(-2 inv_s A - 2 B)
double log_mean_exp(const std::vector<double>& A, const std::vector<double>& B,
                    const std::vector<double>& U, double u_hi, double inv_s, std::size_t denom) {
  double m = -kInf;
  const std::size_t cnt = A.size();
  for (std::size_t j = 0; j < cnt; ++j) {
    if (!(U[j] < u_hi)) continue;
    const double x = -2.0 * inv_s * A[j] - 2.0 * B[j];
    if (x > m) m = x;
  }
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (std::size_t j = 0; j < cnt; ++j) {
    if (!(U[j] < u_hi)) continue;
    s += std::exp(-2.0 * inv_s * A[j] - 2.0 * B[j] - m);
  }
  return m + std::log(s / static_cast<double>(denom));
}
}  // namespace

AnnulusEngine::LogMass AnnulusEngine::log_mass(std::size_t idx, double inv_s) const {
  const AnnulusRun& run = runs_[idx];
  LogMass out;
  const double mult = spec_.split == PotentialSpec::SplitOn::PhiOnly ? inv_s : 1.0;
  const double u1 = run.bands.empty() ? kInf : run.bands[0].u_lo;

  double total = log_mean_exp(run.A0, run.B0, run.U0, u1, inv_s, run.A0.size());
  double band_total = -kInf;
  for (std::size_t j = 0; j < run.bands.size(); ++j) {
    const Band& b = run.bands[j];
    const double u_next = j + 1 < run.bands.size() ? run.bands[j + 1].u_lo : kInf;
    double c = log_mean_exp(b.A, b.B, b.U, u_next, inv_s, b.A.size());
    if (c == -kInf) continue;
    c += b.logP;
    band_total = lse_pair(band_total, c);
    total = lse_pair(total, c);
  }
  out.value = total + run.log_vol;
  out.band_fraction = band_total == -kInf ? 0.0 : std::exp(band_total - total);
  if (!run.cap && run.beta && *run.beta <= 2.0 * mult) out.divergent = true;
  out.se_rel = 0.1;
  return out;
}

AnnulusEngine::MomMass AnnulusEngine::mom_mass(std::size_t idx, double inv_s) const {
  const AnnulusRun& run = runs_[idx];
  MomMass out;
  const double mult = spec_.split == PotentialSpec::SplitOn::PhiOnly ? inv_s : 1.0;
  const double u1 = run.bands.empty() ? kInf : run.bands[0].u_lo;
  const std::size_t nb = static_cast<std::size_t>(cfg_.batches);
  const std::size_t per = run.A0.size() / nb;
  std::vector<double> means(nb, 0.0);
  long clipped = 0;
  for (std::size_t b = 0; b < nb; ++b) {
    double s = 0.0;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) {
      if (!(run.U0[i] < u1)) continue;
      double x = -2.0 * inv_s * run.A0[i] - 2.0 * run.B0[i];
      if (x > 700.0) {
        x = 700.0;
        ++clipped;
      } else if (x < -700.0) {
        x = -700.0;
      }
      s += std::exp(x);
    }
    means[b] = s / static_cast<double>(per);
  }
  std::vector<double> sorted = means;
  std::sort(sorted.begin(), sorted.end());
  const double mom = 0.5 * (sorted[(nb - 1) / 2] + sorted[nb / 2]);
  double mean = std::accumulate(means.begin(), means.end(), 0.0) / nb;
  double var = 0.0;
  for (double mb : means) var += (mb - mean) * (mb - mean);
  var /= std::max<double>(nb - 1, 1.0);

  double band_add = 0.0;
  for (std::size_t j = 0; j < run.bands.size(); ++j) {
    const Band& b = run.bands[j];
    const double u_next = j + 1 < run.bands.size() ? run.bands[j + 1].u_lo : kInf;
    const double c = log_mean_exp(b.A, b.B, b.U, u_next, inv_s, b.A.size());
    if (c == -kInf) continue;
    band_add += std::exp(std::min(700.0, c + b.logP));
  }
  const double vol = std::exp(run.log_vol);
  out.value = vol * (mom + band_add);
  out.se = vol * 1.2533 * std::sqrt(var / nb);
  out.clipped = clipped;
  out.band_fraction = out.value > 0 ? vol * band_add / out.value : 0.0;
  if (!run.cap && run.beta && *run.beta <= 2.0 * mult) out.divergent = true;
  return out;
}

std::optional<AnnulusEngine::TailRate> AnnulusEngine::tail_rate() const {
  std::vector<double> vals;
  for (std::size_t i = runs_.size() / 2; i < runs_.size(); ++i) {
    const AnnulusRun& r = runs_[i];
    if (!r.cap && r.beta) vals.push_back(*r.beta);
  }
  if (vals.size() < 3) return std::nullopt;
  std::sort(vals.begin(), vals.end());
  const std::size_t m = vals.size();
  const double med = m % 2 == 1 ? vals[m / 2] : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
  std::vector<double> dev;
  for (double v : vals) dev.push_back(std::abs(v - med));
  std::sort(dev.begin(), dev.end());
  const double mad = dev[m / 2];
  TailRate tr;
  tr.beta = med;
  tr.se = std::max(1.4826 * mad / std::sqrt(static_cast<double>(m)), 0.004 * med);
  tr.annuli_used = static_cast<int>(m);
  return tr;
}

AnnulusEngine::Slope AnnulusEngine::slope(double inv_s) const {
  Slope out;
  // the consolidated cross-sectional test: median tail rate across the deep
  // annuli against the queried multiplier, ties divergent
  const double mult = spec_.split == PotentialSpec::SplitOn::PhiOnly ? inv_s : 1.0;
  if (auto tr = tail_rate()) out.any_divergent = tr->beta <= 2.0 * mult;
  std::vector<double> xs, ys, ws;
  for (std::size_t i = 0; i < runs_.size(); ++i) {
    const LogMass lm = log_mass(i, inv_s);
    if (!std::isfinite(lm.value)) continue;
    const double se = 0.1 + (lm.band_fraction > 0.5 ? 0.25 : 0.0);
    xs.push_back(runs_[i].k);
    ys.push_back(-lm.value / std::log(2.0));
    ws.push_back(1.0 / (se * se));
  }
  out.used = static_cast<int>(xs.size());
  if (out.used < 4) {
    out.e = 0.0;
    out.se = kInf;
    return out;
  }
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += ws[i];
    swx += ws[i] * xs[i];
    swy += ws[i] * ys[i];
    swxx += ws[i] * xs[i] * xs[i];
    swxy += ws[i] * xs[i] * ys[i];
  }
  const double den = sw * swxx - swx * swx;
  out.e = (sw * swxy - swx * swy) / den;
  const double icpt = (swy - out.e * swx) / sw;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (icpt + out.e * xs[i]);
    ss += ws[i] * r * r;
  }
  const double sigma2 = ss / std::max(out.used - 2, 1);
  out.se = std::sqrt(std::max(sigma2 * sw / den, 1e-12));
  return out;
}

}  // namespace lelong::mc
