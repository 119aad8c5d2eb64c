// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <limits>
#include <vector>

#include "lelong/kernels.hpp"
#include "lelong/rng.hpp"

using namespace lelong;

namespace {

std::vector<double> random_range(std::uint64_t seed, std::size_t n, double lo, double hi) {
  Rng rng(seed, {});
  std::vector<double> v(kern::padded(n), lo);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * rng.next_double();
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("vexp matches std::exp closely and handles the clamp range") {
  const auto& K = kern::scalar_table();
  auto x = random_range(1, 4096, -707.0, 707.0);
  std::vector<double> y(x.size());
  K.vexp(x.data(), y.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double ref = std::exp(x[i]);
    CHECK(std::abs(y[i] - ref) <= 4e-14 * ref);
  }
  // clamp: far outside the range stays finite
  std::vector<double> ext = {-1e4, 1e4, -708.0, 708.0};
  std::vector<double> out(4);
  K.vexp(ext.data(), out.data(), 4);
  CHECK(out[0] > 0.0);
  CHECK(std::isfinite(out[1]));
}

TEST_CASE("vlog matches std::log over a wide range with special values") {
  const auto& K = kern::scalar_table();
  for (auto [lo, hi] : {std::pair{1e-300, 1e-250}, {1e-10, 1.0}, {0.5, 2.0}, {1.0, 1e300}}) {
    auto x = random_range(2, 2048, 0.0, 1.0);
    std::vector<double> y(x.size());
    for (auto& v : x) v = lo * std::pow(hi / lo, v);
    K.vlog(x.data(), y.data(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      double ref = std::log(x[i]);
      CHECK(std::abs(y[i] - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
    }
  }
  std::vector<double> sp = {0.0, std::numeric_limits<double>::infinity(), 5e-324, 1.0};
  std::vector<double> out(4);
  K.vlog(sp.data(), out.data(), 4);
  CHECK(out[0] == -std::numeric_limits<double>::infinity());
  CHECK(out[1] == std::numeric_limits<double>::infinity());
  CHECK(out[2] == doctest::Approx(std::log(5e-324)).epsilon(1e-12));
  CHECK(out[3] == 0.0);
}

TEST_CASE("vsincos matches std::sin/cos on [0, 2pi)") {
  const auto& K = kern::scalar_table();
  auto x = random_range(3, 4096, 0.0, 2.0 * M_PI);
  std::vector<double> s(x.size()), c(x.size());
  K.vsincos(x.data(), s.data(), c.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::abs(s[i] - std::sin(x[i])) <= 2e-15);
    CHECK(std::abs(c[i] - std::cos(x[i])) <= 2e-15);
  }
}

TEST_CASE("vnorm_icdf inverts the normal cdf") {
  const auto& K = kern::scalar_table();
  auto u = random_range(4, 4096, 1e-9, 1.0 - 1e-9);
  std::vector<double> z(u.size());
  K.vnorm_icdf(u.data(), z.data(), u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    double back = 0.5 * std::erfc(-z[i] / std::sqrt(2.0));
    CHECK(std::abs(back - u[i]) <= 2e-8);
  }
}

TEST_CASE("poly_eval computes complex sparse polynomials over blocks") {
  const auto& K = kern::scalar_table();
  // p(z) = (2+i) z0^2 z1 + 3 z1^3 - 1
  kern::PolyProg prog;
  prog.nvars = 2;
  prog.offset = {0, 3, 6, 6};
  prog.coeff_re = {2.0, 3.0, -1.0};
  prog.coeff_im = {1.0, 0.0, 0.0};
  prog.factor_var = {0, 0, 1, 1, 1, 1};
  auto re0 = random_range(5, 256, -2, 2), im0 = random_range(6, 256, -2, 2);
  auto re1 = random_range(7, 256, -2, 2), im1 = random_range(8, 256, -2, 2);
  const double* re[2] = {re0.data(), re1.data()};
  const double* im[2] = {im0.data(), im1.data()};
  std::vector<double> or_(re0.size()), oi(re0.size());
  K.poly_eval(prog, re, im, or_.data(), oi.data(), re0.size());
  for (std::size_t i = 0; i < re0.size(); ++i) {
    std::complex<double> z0(re0[i], im0[i]), z1(re1[i], im1[i]);
    std::complex<double> ref = std::complex<double>(2, 1) * z0 * z0 * z1 + 3.0 * z1 * z1 * z1 - 1.0;
    CHECK(std::abs(std::complex<double>(or_[i], oi[i]) - ref) <= 1e-12 * (1.0 + std::abs(ref)));
  }
}

TEST_CASE("vlse2 is a stable pairwise log-sum-exp with -inf identity") {
  const auto& K = kern::scalar_table();
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> a = {0.0, -800.0, ninf, ninf};
  std::vector<double> b = {0.0, 0.0, 3.0, ninf};
  K.vlse2(a.data(), b.data(), 4);
  CHECK(a[0] == doctest::Approx(std::log(2.0)));
  CHECK(a[1] == doctest::Approx(0.0));
  CHECK(a[2] == doctest::Approx(3.0));
  CHECK(a[3] == ninf);
}

TEST_CASE("scalar and avx2 backends are bit-identical") {
  const auto* avx = kern::avx2_table();
  if (!avx) {
    MESSAGE("AVX2 unavailable; equivalence trivially skipped");
    return;
  }
  const auto& sc = kern::scalar_table();
  const std::size_t n = 8192;

  auto x = random_range(11, n, -700.0, 700.0);
  std::vector<double> y1(x.size()), y2(x.size());
  sc.vexp(x.data(), y1.data(), x.size());
  avx->vexp(x.data(), y2.data(), x.size());
  CHECK(bit_equal(y1, y2));

  auto lx = random_range(12, n, 0.0, 1.0);
  for (auto& v : lx) v = std::pow(10.0, -320.0 + 640.0 * v);
  sc.vlog(lx.data(), y1.data(), lx.size());
  avx->vlog(lx.data(), y2.data(), lx.size());
  CHECK(bit_equal(y1, y2));

  auto tx = random_range(13, n, 0.0, 2.0 * M_PI);
  std::vector<double> s1(tx.size()), c1(tx.size()), s2(tx.size()), c2(tx.size());
  sc.vsincos(tx.data(), s1.data(), c1.data(), tx.size());
  avx->vsincos(tx.data(), s2.data(), c2.data(), tx.size());
  CHECK(bit_equal(s1, s2));
  CHECK(bit_equal(c1, c2));

  auto ux = random_range(14, n, 1e-12, 1.0 - 1e-12);
  sc.vnorm_icdf(ux.data(), y1.data(), ux.size());
  avx->vnorm_icdf(ux.data(), y2.data(), ux.size());
  CHECK(bit_equal(y1, y2));

  auto a1 = random_range(15, n, -30.0, 30.0);
  auto a2 = a1;
  auto bx = random_range(16, n, -30.0, 30.0);
  sc.vlse2(a1.data(), bx.data(), a1.size());
  avx->vlse2(a2.data(), bx.data(), a2.size());
  CHECK(bit_equal(a1, a2));

  kern::PolyProg prog;
  prog.nvars = 2;
  prog.offset = {0, 3, 6};
  prog.coeff_re = {0.7, -1.3};
  prog.coeff_im = {0.2, 0.9};
  prog.factor_var = {0, 1, 1, 0, 0, 1};
  auto re0 = random_range(17, n, -2, 2), im0 = random_range(18, n, -2, 2);
  auto re1 = random_range(19, n, -2, 2), im1 = random_range(20, n, -2, 2);
  const double* re[2] = {re0.data(), re1.data()};
  const double* im[2] = {im0.data(), im1.data()};
  std::vector<double> pr1(re0.size()), pi1(re0.size()), pr2(re0.size()), pi2(re0.size());
  sc.poly_eval(prog, re, im, pr1.data(), pi1.data(), re0.size());
  avx->poly_eval(prog, re, im, pr2.data(), pi2.data(), re0.size());
  CHECK(bit_equal(pr1, pr2));
  CHECK(bit_equal(pi1, pi2));

  CHECK(sc.reduce_sum(x.data(), x.size()) == avx->reduce_sum(x.data(), x.size()));
  CHECK(sc.reduce_max(x.data(), x.size()) == avx->reduce_max(x.data(), x.size()));
}
