// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "lelong/sampling.hpp"
#include "lelong/threads.hpp"

namespace lelong::geom {

namespace {
using CMat = Eigen::MatrixXcd;

CMat to_eigen(const std::vector<cdouble>& colmajor, int rows, int cols) {
  CMat m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = colmajor[static_cast<std::size_t>(c) * rows + r];
  return m;
}

std::vector<cdouble> from_eigen(const CMat& m) {
  std::vector<cdouble> v(static_cast<std::size_t>(m.rows()) * m.cols());
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r) v[static_cast<std::size_t>(c) * m.rows() + r] = m(r, c);
  return v;
}
}  // namespace

double UnitaryMatrix::unitarity_residual() const {
  CMat U = to_eigen(entries, n, n);
  return (U.adjoint() * U - CMat::Identity(n, n)).cwiseAbs().maxCoeff();
}

double Subspace::orthonormality_residual() const {
  CMat F = to_eigen(frame, n, k);
  return (F.adjoint() * F - CMat::Identity(k, k)).cwiseAbs().maxCoeff();
}

std::vector<cdouble> Subspace::embed(std::span<const cdouble> w) const {
  if (static_cast<int>(w.size()) != k) throw std::invalid_argument("Subspace::embed: arity");
  std::vector<cdouble> z(n, 0.0);
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < n; ++r) z[r] += at(r, c) * w[c];
  return z;
}

UnitaryMatrix haar_unitary(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("haar_unitary: n >= 1");
  Rng rng(seed, {0x68616172ULL});
  CMat G(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      double u1 = rng.next_double() * 0.999999 + 5e-7;
      double u2 = rng.next_double();
      double mag = std::sqrt(-2.0 * std::log(u1));
      G(r, c) = cdouble(mag * std::cos(2 * M_PI * u2), mag * std::sin(2 * M_PI * u2));
    }
  Eigen::HouseholderQR<CMat> qr(G);
  CMat Q = qr.householderQ() * CMat::Identity(n, n);
  CMat R = qr.matrixQR().triangularView<Eigen::Upper>();
  // phase fix: divide each column by the phase of the matching R diagonal,
  // which makes the factorization unique and the law exactly Haar
  for (int c = 0; c < n; ++c) {
    cdouble d = R(c, c);
    double ad = std::abs(d);
    cdouble ph = ad > 0 ? d / ad : cdouble(1.0);
    Q.col(c) *= ph;
  }
  UnitaryMatrix U;
  U.n = n;
  U.entries = from_eigen(Q);
  return U;
}

Subspace random_subspace(int k, int n, std::uint64_t seed) {
  if (k < 1 || k > n) throw std::invalid_argument("random_subspace: need 1 <= k <= n");
  UnitaryMatrix U = haar_unitary(n, seed);
  Subspace T;
  T.k = k;
  T.n = n;
  T.frame.assign(U.entries.begin(), U.entries.begin() + static_cast<std::size_t>(k) * n);
  return T;
}

ExprPtr restrict_expr(const ExprPtr& expr, const Subspace& T) {
  if (expr->arity() != T.n) throw std::invalid_argument("restrict_expr: arity mismatch");
  return compose(expr, PolyMap::linear(T.k, T.n, T.frame));
}

double sphere_surface(int k) {
  double lg = k * std::log(M_PI) - std::lgamma(k);
  return 2.0 * std::exp(lg);
}

namespace {

double mollified_ball(double r) {
  // 1 on r <= 0.6, smooth cubic falloff to 0 at r = 0.9
  if (r <= 0.6) return 1.0;
  if (r >= 0.9) return 0.0;
  double u = (r - 0.6) / 0.3;
  return 1.0 - u * u * (3.0 - 2.0 * u);
}

double radial_testfn(TestFunction g, double r) {
  return g == TestFunction::Gaussian ? std::exp(-r * r) : mollified_ball(r);
}

// int_{C^n} g(|z|) dlam = c_n int_0^inf r^{2n-1} g(r) dr by 1-D quadrature
double radial_integral(TestFunction g, int n) {
  const double R = g == TestFunction::Gaussian ? 8.0 : 0.9;
  const int N = 20000;
  double s = 0.0;
  for (int i = 0; i < N; ++i) {
    double r = (i + 0.5) * R / N;
    s += std::pow(r, 2 * n - 1) * radial_testfn(g, r);
  }
  return sphere_surface(n) * s * R / N;
}

}  // namespace

GrassmannCheck polar_grassmann_check(TestFunction g, int k, int n, int n_planes,
                                     std::size_t n_samples, std::uint64_t seed) {
  if (k < 1 || k > n) throw std::invalid_argument("polar_grassmann_check: need 1 <= k <= n");
  GrassmannCheck out;
  out.planes = n_planes;
  out.samples_per_plane = n_samples;
  out.lhs = radial_integral(g, n);

  const double R = g == TestFunction::Gaussian ? 7.0 : 0.9;
  std::vector<double> per_plane(n_planes, 0.0);
  parallel_for(n_planes, [&](std::size_t pi) {
    Subspace T = random_subspace(k, n, hash_stream(seed, {0x706c616eULL, pi}));
    // int_T |z|^{2(n-k)} g(z) dlam_k over the ball of radius R in the plane;
    // |frame w| = |w| for orthonormal frames, so only |w| matters
    Rng rng(seed, {0x67726173ULL, pi});
    mc::Block blk;
    mc::sample_annulus(rng, k, 0.0, R, n_samples, blk);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double r = blk.radius[i];
      acc += std::pow(r, 2.0 * (n - k)) * radial_testfn(g, r);
    }
    const double vol = mc::annulus_volume(k, 0.0, R);
    per_plane[pi] = vol * acc / static_cast<double>(n_samples);
  });
  double mean = 0.0;
  for (double v : per_plane) mean += v;
  mean /= n_planes;
  double var = 0.0;
  for (double v : per_plane) var += (v - mean) * (v - mean);
  out.plane_variance = n_planes > 1 ? var / (n_planes - 1) : 0.0;

  out.rhs = sphere_surface(n) / sphere_surface(k) * mean;
  out.rel_error = std::abs(out.lhs - out.rhs) / std::abs(out.lhs);
  return out;
}

LineRestrictionEstimate lelong_via_lines(const ExprPtr& expr, const ComplexPoint& a, int n_lines,
                                         std::uint64_t seed, const mc::McConfig& cfg) {
  if (n_lines < 3) throw std::invalid_argument("lelong_via_lines: need at least 3 lines");
  const int n = expr->arity();
  if (a.dim() != n) throw std::invalid_argument("lelong_via_lines: arity mismatch");

  LineRestrictionEstimate out;
  out.per_line.assign(n_lines, 0.0);
  out.ci_lo.assign(n_lines, 0.0);
  out.ci_hi.assign(n_lines, 0.0);
  std::vector<mc::ThresholdEstimate> est(n_lines);
  parallel_for(n_lines, [&](std::size_t li) {
    Subspace L = random_subspace(1, n, hash_stream(seed, {0x6c696e65ULL, li}));
    // phi(a + w u) as a 1-variable expression
    std::vector<cdouble> col(L.frame.begin(), L.frame.end());
    ExprPtr restricted = compose(expr, PolyMap::linear(1, n, col, a.coords));
    ComplexPoint origin;
    origin.coords.assign(1, cdouble(0.0));
    WeightSpec w0 = WeightSpec::zero(1);
    mc::McConfig c1 = cfg;
    est[li] = mc::estimate_threshold(restricted, w0, origin, hash_stream(seed, {0x31646573ULL, li}),
                                     c1);
  });
  for (int i = 0; i < n_lines; ++i) {
    out.per_line[i] = est[i].nu_hat;
    out.ci_lo[i] = est[i].ci_lo;
    out.ci_hi[i] = est[i].ci_hi;
  }
  std::vector<double> sorted = out.per_line;
  std::sort(sorted.begin(), sorted.end());
  out.median = sorted[sorted.size() / 2];
  std::vector<double> dev;
  for (double v : sorted) dev.push_back(std::abs(v - out.median));
  std::sort(dev.begin(), dev.end());
  out.mad = dev[dev.size() / 2];
  int far = 0;
  for (double v : out.per_line)
    if (std::abs(v - out.median) > std::max(6.0 * out.mad, 0.15 * std::max(out.median, 0.5))) ++far;
  out.multimodal = far * 5 > n_lines;  // more than 20% of lines disagree
  return out;
}

}  // namespace lelong::geom
