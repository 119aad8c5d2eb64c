// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lelong/mc_engine.hpp"
#include "lelong/parser.hpp"
#include "lelong/threads.hpp"

namespace lelong::bergman {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void enumerate_indices(int n, int degree, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(n, 0);
  // colex enumeration of all multi-indices with |beta| <= degree
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == n) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[pos] = e;
      rec(pos + 1, left - e);
    }
    cur[pos] = 0;
  };
  rec(0, degree);
}

Rat rationalize(double x) {
  return Rat(static_cast<std::int64_t>(std::llround(x * 1e9)), 1000000000LL);
}

// psi(z - a) as an expression in z: t log|z - a| = (t/2) log(sum |z_i-a_i|^2)
ExprPtr shifted_weight_expr(const WeightSpec& w, const ComplexPoint& a, int n) {
  if (w.kind == WeightSpec::Kind::Radial) {
    if (w.t == 0.0) return nullptr;
    std::vector<PowTerm> terms;
    for (int v = 0; v < n; ++v) {
      Poly p = Poly::variable(n, v);
      if (a.coords[v] != cdouble(0.0)) p = p - Poly::constant(n, a.coords[v]);
      terms.push_back({std::move(p), Rat(2)});
    }
    return scaled(rationalize(0.5 * w.t), PshExpr::log_sum_pow(std::move(terms)));
  }
  bool shift = false;
  for (const auto& c : a.coords) shift = shift || c != cdouble(0.0);
  if (!shift) return flatten(w.expr);
  std::vector<cdouble> eye(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) eye[static_cast<std::size_t>(i) * n + i] = 1.0;
  std::vector<cdouble> neg_a;
  for (const auto& c : a.coords) neg_a.push_back(-c);
  return flatten(compose(w.expr, PolyMap::linear(n, n, eye, neg_a)));
}

// per-sample weight contribution of one engine stratum
struct StratumView {
  const std::vector<double>* A;
  const std::vector<double>* B;
  const std::vector<double>* U;
  const std::vector<std::vector<double>>* re;
  const std::vector<std::vector<double>>* im;
  double log_w;  // log(vol * P / denom)
  double u_hi;
};

}  // namespace

Eigen::VectorXcd BergmanModel::basis_at(std::span<const cdouble> z) const {
  Eigen::VectorXcd v(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    cdouble p(1.0);
    for (int vv = 0; vv < n; ++vv)
      for (int e = 0; e < basis[i][vv]; ++e) p *= z[vv];
    v(static_cast<Eigen::Index>(i)) = p;
  }
  return v;
}

BergmanModel build_model(const ExprPtr& expr, const WeightSpec& w, const ComplexPoint& a, int m,
                         int degree, double radius, const QuadratureSpec& quad) {
  const int n = expr->arity();
  if (m < 1) throw std::invalid_argument("build_model: m >= 1");
  if (degree < 0) throw std::invalid_argument("build_model: degree >= 0");
  if (!(radius > 0)) throw std::invalid_argument("build_model: radius > 0");
  if (a.dim() != n) throw std::invalid_argument("build_model: center arity");

  BergmanModel model;
  model.center = a;
  model.m = m;
  model.degree = degree;
  model.radius = radius;
  model.n = n;
  model.quadrature = quad;
  std::vector<std::vector<int>> all_basis;
  enumerate_indices(n, degree, all_basis);

  // smooth 1-D fast path: polar Gauss-Legendre x uniform angles is exact for
  // the monomial Gram of a constant weight
  if (n == 1 && expr->is_zero() && w.kind == WeightSpec::Kind::Radial && w.t == 0.0) {
    model.exact_quadrature = true;
    model.basis = all_basis;
    const int dim = static_cast<int>(all_basis.size());
    model.gram.setZero(dim, dim);
    const int nr = 64, na = 4 * degree + 8;
    // Gauss-Legendre nodes on [0, 1] (computed by Newton on Legendre P_nr)
    std::vector<double> xs(nr), ws(nr);
    for (int i = 0; i < nr; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (nr + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= nr; ++j) {
          double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        double dp = nr * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      xs[i] = 0.5 * (x + 1.0);
      double p0 = 1.0, p1 = xs[i] * 2 - 1;
      for (int j = 2; j <= nr; ++j) {
        double p2 = ((2.0 * j - 1.0) * (xs[i] * 2 - 1) * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = nr * ((xs[i] * 2 - 1) * p1 - p0) / ((xs[i] * 2 - 1) * (xs[i] * 2 - 1) - 1.0);
      ws[i] = 1.0 / ((1.0 - (xs[i] * 2 - 1) * (xs[i] * 2 - 1)) * dp * dp);
    }
    for (int ir = 0; ir < nr; ++ir) {
      const double r = radius * xs[ir];
      const double wr = ws[ir] * radius;  // GL weight mapped to [0, radius]
      for (int ia = 0; ia < na; ++ia) {
        const double th = 2.0 * M_PI * ia / na;
        const cdouble z = std::polar(r, th);
        const double wq = wr * r * (2.0 * M_PI / na);
        for (int bi = 0; bi < dim; ++bi)
          for (int bj = 0; bj <= bi; ++bj) {
            cdouble val = std::pow(z, all_basis[bi][0]) * std::conj(std::pow(z, all_basis[bj][0]));
            model.gram(bi, bj) += wq * val;
          }
      }
    }
    for (int bi = 0; bi < dim; ++bi)
      for (int bj = bi + 1; bj < dim; ++bj) model.gram(bi, bj) = std::conj(model.gram(bj, bi));
  } else {
    // shared stratified-annulus quadrature with splitting bands
    mc::PotentialSpec spec;
    spec.n = n;
    spec.split = mc::PotentialSpec::SplitOn::Total;
    spec.fixed_inv_s = m;
    if (!expr->is_zero()) {
      spec.phi = EvalPlan(flatten(expr));
      spec.phi_set = true;
    }
    bool center_zero = true;
    for (const auto& c : a.coords) center_zero = center_zero && c == cdouble(0.0);
    if (w.kind == WeightSpec::Kind::Radial && center_zero) {
      spec.radial_t = w.t;
    } else if (ExprPtr pe = shifted_weight_expr(w, a, n)) {
      spec.psi = EvalPlan(pe);
      spec.psi_set = true;
    }
    mc::EngineConfig ec;
    ec.k_min = 0;
    ec.k_max = quad.shells;
    ec.n0 = quad.samples;
    ec.radius_base = radius;
    ec.store_points = true;
    ec.seed = quad.seed;
    mc::AnnulusEngine eng(std::move(spec), ec);
    eng.run();

    // collect strata views
    std::vector<StratumView> strata;
    for (const auto& run : eng.annuli()) {
      const double u1 = run.bands.empty() ? kInf : run.bands[0].u_lo;
      strata.push_back({&run.A0, &run.B0, &run.U0, &run.pts0.re, &run.pts0.im,
                        run.log_vol - std::log(static_cast<double>(run.A0.size())), u1});
      for (std::size_t j = 0; j < run.bands.size(); ++j) {
        const auto& b = run.bands[j];
        if (b.A.empty() || b.re.empty()) continue;
        const double u_hi = j + 1 < run.bands.size() ? run.bands[j + 1].u_lo : kInf;
        strata.push_back({&b.A, &b.B, &b.U, &b.re, &b.im,
                          run.log_vol + b.logP - std::log(static_cast<double>(b.A.size())), u_hi});
      }
    }

    // basis filter: a diagonal whose deep-band contributions stop decaying
    // on uncapped annuli is non-integrable and gets dropped
    std::vector<bool> keep(all_basis.size(), true);
    for (std::size_t bi = 0; bi < all_basis.size(); ++bi) {
      int bad = 0, tested = 0;
      for (const auto& run : eng.annuli()) {
        if (run.cap || run.bands.size() < 6) continue;
        ++tested;
        std::vector<double> contrib;
        for (std::size_t j = run.bands.size() - 4; j < run.bands.size(); ++j) {
          const auto& b = run.bands[j];
          const double u_hi = j + 1 < run.bands.size() ? run.bands[j + 1].u_lo : kInf;
          double mx = -kInf;
          for (std::size_t i = 0; i < b.A.size(); ++i) {
            if (!(b.U[i] < u_hi)) continue;
            double lz = 0.0;
            for (int v = 0; v < n; ++v) {
              const double zr = b.re[v][i], zi = b.im[v][i];
              if (all_basis[bi][v] > 0) lz += all_basis[bi][v] * std::log(zr * zr + zi * zi);
            }
            const double x = lz - 2.0 * m * b.A[i] - 2.0 * b.B[i];
            mx = std::max(mx, x);
          }
          if (mx > -kInf) contrib.push_back(b.logP + mx);
        }
        if (contrib.size() >= 3) {
          int nondecay = 0;
          for (std::size_t j = 1; j < contrib.size(); ++j)
            if (contrib[j] - contrib[j - 1] > -0.02) ++nondecay;
          if (nondecay * 2 >= static_cast<int>(contrib.size() - 1)) ++bad;
        }
      }
      if (tested > 0 && bad * 2 >= tested) keep[bi] = false;
    }
    for (std::size_t bi = 0; bi < all_basis.size(); ++bi)
      (keep[bi] ? model.basis : model.dropped).push_back(all_basis[bi]);
    if (model.basis.empty()) throw NumericalError("build_model: every basis element diverges");

    const int dim = static_cast<int>(model.basis.size());
    model.gram.setZero(dim, dim);
    Eigen::VectorXcd v(dim);
    for (const auto& st : strata) {
      for (std::size_t i = 0; i < st.A->size(); ++i) {
        if (!((*st.U)[i] < st.u_hi)) continue;
        double lw = st.log_w - 2.0 * m * (*st.A)[i] - 2.0 * (*st.B)[i];
        if (lw > 700.0) lw = 700.0;
        const double sw = std::exp(0.5 * lw);
        for (int bi = 0; bi < dim; ++bi) {
          cdouble p(sw, 0.0);
          for (int vv = 0; vv < n; ++vv) {
            const cdouble z((*st.re)[vv][i], (*st.im)[vv][i]);
            for (int e = 0; e < model.basis[bi][vv]; ++e) p *= z;
          }
          v(bi) = p;
        }
        model.gram.selfadjointView<Eigen::Lower>().rankUpdate(v, 1.0);
      }
    }
    model.gram = model.gram.selfadjointView<Eigen::Lower>();
  }

  model.hermiticity_residual = (model.gram - model.gram.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(model.gram);
  model.min_eigenvalue = es.eigenvalues().minCoeff();
  const double floor = 1e-12 * model.gram.real().trace();
  if (!(model.min_eigenvalue > floor))
    throw NumericalError("build_model: Gram matrix singular or indefinite (needs more samples "
                         "or a non-integrable weight was passed)");
  model.factor.compute(model.gram);
  if (model.factor.info() != Eigen::Success)
    throw NumericalError("build_model: Cholesky factorization failed");
  return model;
}

double bergman_value(const BergmanModel& model, const ComplexPoint& z) {
  if (z.dim() != model.n) throw std::invalid_argument("bergman_value: arity");
  double r2 = 0;
  for (const auto& c : z.coords) r2 += std::norm(c);
  if (std::sqrt(r2) > model.radius * (1.0 + 1e-12))
    throw std::invalid_argument("bergman_value: point outside the domain");
  Eigen::VectorXcd v = model.basis_at(z.coords);
  Eigen::VectorXcd sol = model.factor.solve(v);
  return std::max(0.0, v.dot(sol).real());
}

double psi_m(const BergmanModel& model, const ComplexPoint& z) {
  const double b = bergman_value(model, z);
  if (!(b > 0.0)) throw std::domain_error("psi_m: Bergman value vanished");
  return std::log(b) / (2.0 * model.m);
}

SandwichReport sandwich_check(const ExprPtr& expr, const std::vector<int>& m_list, int degree,
                              double radius, double l, double delta, std::uint64_t seed) {
  const int n = expr->arity();
  if (!(l > 0) || !(delta > 0) || l + delta > n + 1e-9)
    throw std::invalid_argument("sandwich_check: need 0 < l = t and delta = n - t");
  SandwichReport rep;
  rep.m_list = m_list;

  // evaluation points with phi > -inf
  std::vector<ComplexPoint> pts;
  Rng rng(seed, {0x73616e64ULL});
  while (pts.size() < 12) {
    ComplexPoint z;
    for (int v = 0; v < n; ++v)
      z.coords.push_back(cdouble(0.6 * radius * (rng.next_double() - 0.5),
                                 0.6 * radius * (rng.next_double() - 0.5)));
    if (std::isfinite(evaluate(*expr, z.coords))) pts.push_back(std::move(z));
  }
  rep.points = static_cast<int>(pts.size());

  const double r_sup = 0.1 * radius;
  const double t = l;
  std::vector<double> c1s, c2s;
  rep.width_by_m.assign(m_list.size(), 0.0);
  for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
    const int m = m_list[mi];
    double width = 0.0;
    for (const auto& z : pts) {
      WeightSpec w = make_radial(t, z);
      QuadratureSpec qs;
      qs.seed = hash_stream(seed, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(&z - pts.data())});
      qs.samples = 1024;
      qs.shells = 20;
      BergmanModel model = build_model(expr, w, z, m, degree, radius, qs);
      const double psi = psi_m(model, z);
      const double phi = evaluate(*expr, z.coords);
      // sup of phi over the ball |z - zeta| < r_sup by sampling
      double sup = phi;
      Rng srng(seed, {0x73757042ULL, static_cast<std::uint64_t>(m)});
      for (int s = 0; s < 256; ++s) {
        ComplexPoint zz = z;
        for (int v = 0; v < n; ++v)
          zz.coords[v] += cdouble(r_sup * (srng.next_double() - 0.5),
                                  r_sup * (srng.next_double() - 0.5));
        sup = std::max(sup, evaluate(*expr, zz.coords));
      }
      c1s.push_back(m * (phi - psi));
      c2s.push_back(m * (psi - sup - (l - n) * std::log(r_sup) / m));
      width = std::max(width, std::abs(psi - phi));
    }
    rep.width_by_m[mi] = width;
  }
  rep.c_lower = *std::max_element(c1s.begin(), c1s.end());
  rep.c_upper = *std::max_element(c2s.begin(), c2s.end());
  // violations against the fitted constants (zero when both fits are finite)
  rep.violations = std::isfinite(rep.c_lower) && std::isfinite(rep.c_upper) ? 0 : 1;
  rep.width_decreasing =
      rep.width_by_m.size() < 2 || rep.width_by_m.back() <= rep.width_by_m.front() + 0.05;
  return rep;
}

std::vector<AttenuationPoint> attenuation_probe(const ExprPtr& expr, const WeightSpec& w,
                                                const std::vector<ComplexPoint>& grid, int degree,
                                                double radius, std::uint64_t seed) {
  const int n = expr->arity();
  std::vector<AttenuationPoint> out(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const ComplexPoint& g = grid[gi];
    const int j_lo = 3, j_hi = 8;
    std::vector<double> sups, logr;
    for (int j = j_lo; j <= j_hi; ++j) {
      const double r = std::pow(2.0, -j);
      Rng rng(seed, {0x61747448ULL, gi, static_cast<std::uint64_t>(j)});
      double sup = -kInf;
      const int per_shell = 16;
      for (int s = 0; s < per_shell; ++s) {
        ComplexPoint z = g;
        double nrm = 0;
        std::vector<double> dir(2 * n);
        for (auto& d : dir) {
          d = rng.next_double() - 0.5;
          nrm += d * d;
        }
        nrm = std::sqrt(nrm);
        for (int v = 0; v < n; ++v)
          z.coords[v] += cdouble(r * dir[2 * v] / nrm, r * dir[2 * v + 1] / nrm);
        WeightSpec wz = w;
        wz.center = z;
        QuadratureSpec qs;
        qs.seed = hash_stream(seed, {gi, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(s)});
        qs.samples = 1024;
        qs.shells = 18;
        try {
          BergmanModel model = build_model(expr, wz, z, 1, degree, radius, qs);
          const double b = bergman_value(model, z);
          if (b > 0) sup = std::max(sup, std::log(b));
        } catch (const NumericalError&) {
          // shell point with an unresolvable Gram contributes nothing
        }
      }
      if (sup > -kInf) {
        sups.push_back(sup);
        logr.push_back(std::log(r));
      }
    }
    AttenuationPoint ap;
    ap.z = g;
    if (sups.size() >= 4) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const int m = static_cast<int>(sups.size());
      for (int i = 0; i < m; ++i) {
        sx += logr[i];
        sy += sups[i];
        sxx += logr[i] * logr[i];
        sxy += logr[i] * sups[i];
      }
      const double den = m * sxx - sx * sx;
      ap.slope = (m * sxy - sx * sy) / den;
      double ss = 0;
      const double icpt = (sy - ap.slope * sx) / m;
      for (int i = 0; i < m; ++i) {
        const double r = sups[i] - (icpt + ap.slope * logr[i]);
        ss += r * r;
      }
      ap.se = std::sqrt(std::max(ss / std::max(m - 2, 1), 1e-12) / den * m);
      ap.positive = ap.slope > std::max(2.0 * ap.se, 0.1);
    }
    out[gi] = ap;
  }
  return out;
}

}  // namespace lelong::bergman
