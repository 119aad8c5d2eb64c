// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace lelong::mc {

void Block::resize(int dim, std::size_t cnt) {
  n = dim;
  count = cnt;
  const std::size_t np = kern::padded(cnt);
  re.assign(dim, std::vector<double>(np, 1.0));
  im.assign(dim, std::vector<double>(np, 0.0));
  radius.assign(np, 1.0);
}

std::vector<const double*> Block::re_ptrs() const {
  std::vector<const double*> p;
  p.reserve(re.size());
  for (const auto& v : re) p.push_back(v.data());
  return p;
}

std::vector<const double*> Block::im_ptrs() const {
  std::vector<const double*> p;
  p.reserve(im.size());
  for (const auto& v : im) p.push_back(v.data());
  return p;
}

double annulus_volume(int n, double r_lo, double r_hi) {
  return std::exp(log_annulus_volume(n, r_lo, r_hi));
}

double log_annulus_volume(int n, double r_lo, double r_hi) {
  // vol B(0,r) = pi^n r^{2n} / n!
  double logc = n * std::log(M_PI) - std::lgamma(n + 1.0);
  double hi = 2.0 * n * std::log(r_hi);
  double ratio = std::pow(r_lo / r_hi, 2.0 * n);
  return logc + hi + std::log1p(-ratio);
}

namespace {

// unit directions times radii from the annulus radial law
void directions_and_radii(Rng& rng, int n, double r_lo, double r_hi, bool on_sphere,
                          std::size_t count, Block& out) {
  const auto& K = kern::active();
  out.resize(n, count);
  const std::size_t np = out.padded_count();

  std::vector<double> u(np, 0.5);
  for (int v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < count; ++i) u[i] = rng.next_double() * 0.999999 + 5e-7;
    K.vnorm_icdf(u.data(), out.re[v].data(), np);
    for (std::size_t i = 0; i < count; ++i) u[i] = rng.next_double() * 0.999999 + 5e-7;
    K.vnorm_icdf(u.data(), out.im[v].data(), np);
  }
  const double p2n = 2.0 * n;
  const double lo_p = std::pow(r_lo, p2n), hi_p = std::pow(r_hi, p2n);
  for (std::size_t i = 0; i < count; ++i) {
    double s2 = 0.0;
    for (int v = 0; v < n; ++v)
      s2 += out.re[v][i] * out.re[v][i] + out.im[v][i] * out.im[v][i];
    double nrm = std::sqrt(s2);
    if (nrm < 1e-300) {
      out.re[0][i] = 1.0;
      nrm = 1.0;
    }
    double r = on_sphere ? r_hi : std::pow(lo_p + rng.next_double() * (hi_p - lo_p), 1.0 / p2n);
    const double f = r / nrm;
    for (int v = 0; v < n; ++v) {
      out.re[v][i] *= f;
      out.im[v][i] *= f;
    }
    out.radius[i] = r;
  }
}

}  // namespace

void sample_annulus(Rng& rng, int n, double r_lo, double r_hi, std::size_t count, Block& out) {
  if (!(0.0 <= r_lo && r_lo < r_hi)) throw std::invalid_argument("sample_annulus: bad radii");
  directions_and_radii(rng, n, r_lo, r_hi, false, count, out);
}

void sample_sphere(Rng& rng, int n, double r, std::size_t count, Block& out) {
  if (!(r > 0.0)) throw std::invalid_argument("sample_sphere: bad radius");
  directions_and_radii(rng, n, r, r, true, count, out);
}

void sample_torus(std::uint64_t seed, const std::vector<double>& rho, std::size_t count,
                  Block& out) {
  const int n = static_cast<int>(rho.size());
  const auto& K = kern::active();
  out.resize(n, count);
  const std::size_t np = out.padded_count();

  // Kronecker lattice: frac(j sqrt(p_v) + offset_v) per coordinate
  static const double primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  Rng orng(seed, {0x746f7275ULL});
  std::vector<double> theta(np, 0.0), s(np), c(np);
  double r2 = 0.0;
  for (double rv : rho) r2 += rv * rv;
  for (int v = 0; v < n; ++v) {
    const double step = std::sqrt(primes[v % 16]);
    const double off = orng.next_double();
    for (std::size_t i = 0; i < count; ++i) {
      double x = std::fmod(static_cast<double>(i + 1) * step + off, 1.0);
      theta[i] = 2.0 * M_PI * x;
    }
    K.vsincos(theta.data(), s.data(), c.data(), np);
    for (std::size_t i = 0; i < count; ++i) {
      out.re[v][i] = rho[v] * c[i];
      out.im[v][i] = rho[v] * s[i];
    }
  }
  const double rr = std::sqrt(r2);
  for (std::size_t i = 0; i < count; ++i) out.radius[i] = rr;
}

}  // namespace lelong::mc
