// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lelong/json_io.hpp"
#include "lelong/montecarlo.hpp"
#include "lelong/parser.hpp"
#include "lelong/threads.hpp"
#include "lelong/toric.hpp"

using namespace lelong;

namespace {
ComplexPoint origin(int n) {
  ComplexPoint a;
  a.coords.assign(n, cdouble(0.0));
  return a;
}

double estimate(const char* src, int n, double t, std::uint64_t seed = 7) {
  auto e = parse(src, n);
  auto est = mc::estimate_threshold(e, make_radial(t, origin(n)), origin(n), seed);
  return est.nu_hat;
}
}  // namespace

TEST_CASE("annulus masses of the zero function match the volume") {
  auto e = PshExpr::zero(2);
  auto p = mc::integral_profile(e, WeightSpec::zero(2), 1.0, 4, 12, 4096, 3);
  for (std::size_t i = 0; i < p.masses.size(); ++i) {
    const int k = p.k_min + static_cast<int>(i);
    const double vol = (M_PI * M_PI / 2.0) * std::pow(2.0, -4.0 * k) * (1.0 - std::pow(2.0, -4.0));
    CHECK(std::abs(p.masses[i] - vol) <= std::max(3.0 * p.stderrs[i], 1e-12 * vol));
  }
  auto de = mc::divergence_exponent(p);
  CHECK_FALSE(de.flagged);
  CHECK(de.e == doctest::Approx(4.0).epsilon(0.02));  // 2n
}

TEST_CASE("radial decay exponents match the closed forms in n = 1") {
  auto e = parse("log(|z1|^1)", 1);
  WeightSpec w0 = WeightSpec::zero(1);
  for (double s : {2.0, 4.0}) {
    auto p = mc::integral_profile(e, w0, s, 4, 14, 8192, 5);
    auto de = mc::divergence_exponent(p);
    CHECK_FALSE(de.flagged);
    CHECK(std::abs(de.e - (2.0 - 2.0 / s)) <= std::max(3.0 * de.se, 0.06));
  }
  // threshold case s = 1: exponent about 0
  auto p1 = mc::integral_profile(e, w0, 1.0, 4, 14, 8192, 5);
  auto d1 = mc::divergence_exponent(p1);
  CHECK(std::abs(d1.e) <= std::max(3.0 * d1.se, 0.08));
}

TEST_CASE("estimate_threshold reproduces the closed-form values") {
  // half log |z|^2 in n=2: nu = max(1/2, 1/(2-t))
  CHECK(estimate("0.5*log(|z1|^2+|z2|^2)", 2, 0.0) == doctest::Approx(0.5).epsilon(0.08));
  // log|z1| in n=2 at t=1: nu = 1
  CHECK(estimate("log(|z1|^1)", 2, 1.0) == doctest::Approx(1.0).epsilon(0.06));
  // axis-dominated case: log|z1| at t=0 in n=2 still has nu = 1
  CHECK(estimate("log(|z1|^1)", 2, 0.0) == doctest::Approx(1.0).epsilon(0.06));
  // cusp at t=0: 2/(1+1/3) = 3/2
  CHECK(estimate("log(|z1|^2+|z2|^6)", 2, 0.0) == doctest::Approx(1.5).epsilon(0.05));
  // unequal monomial at t=0: the definition gives max alpha_i = 2
  CHECK(estimate("log(|z1^2*z2|^1)", 2, 0.0) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("bounded functions report a zero threshold with a warning") {
  auto e = PshExpr::zero(2);
  auto est = mc::estimate_threshold(e, make_radial(0.0, origin(2)), origin(2), 11);
  CHECK(est.nu_hat == 0.0);
  REQUIRE_FALSE(est.warnings.empty());
  bool below = false;
  for (const auto& w : est.warnings) below = below || w.find("no divergence") != std::string::npos;
  CHECK(below);
}

TEST_CASE("exponent curve is nondecreasing in s along the trace") {
  auto e = parse("log(|z1^1*z2^1|^1)", 2);
  auto est = mc::estimate_threshold(e, make_radial(1.0, origin(2)), origin(2), 13);
  for (std::size_t i = 1; i < est.exponent_curve.size(); ++i) {
    const auto& [s0, e0, se0] = est.exponent_curve[i - 1];
    const auto& [s1, e1, se1] = est.exponent_curve[i];
    CHECK(e1 >= e0 - 2.0 * (se0 + se1));
  }
}

TEST_CASE("determinism: same seed gives bit-identical estimates across worker counts") {
  auto e = parse("log(|z1|^2+|z2|^6)", 2);
  set_worker_count(1);
  auto est1 = mc::estimate_threshold(e, make_radial(0.0, origin(2)), origin(2), 99);
  set_worker_count(4);
  auto est2 = mc::estimate_threshold(e, make_radial(0.0, origin(2)), origin(2), 99);
  set_worker_count(0);
  CHECK(describe(est1).dump() == describe(est2).dump());
}

TEST_CASE("scaling law within combined confidence intervals") {
  auto e = parse("log(|z1|^1)", 2);
  auto es = parse("2*log(|z1|^1)", 2);
  auto w = make_radial(1.0, origin(2));
  auto n1 = mc::estimate_threshold(e, w, origin(2), 17);
  auto n2 = mc::estimate_threshold(es, w, origin(2), 18);
  CHECK(std::abs(n2.nu_hat - 2.0 * n1.nu_hat) <=
        2.0 * (n2.ci_hi - n2.ci_lo) + 2.0 * (n1.ci_hi - n1.ci_lo) + 0.02);
}

TEST_CASE("property suite: subadditivity and max bound") {
  auto e1 = parse("log(|z1|^1)", 2);
  auto e2 = parse("log(|z2|^1)", 2);
  auto rep = mc::hoelder_property_suite(e1, e2, make_radial(1.0, origin(2)), 21);
  CHECK(rep.subadditive_ok);
  CHECK(rep.max_ok);
  // nu(phi + phi) with phi = log|z1|: the worked doubling value is 2
  auto dbl = mc::hoelder_property_suite(e1, e1, make_radial(1.0, origin(2)), 22);
  CHECK(dbl.nu_sum.nu_hat == doctest::Approx(2.0).epsilon(0.07));
  // additive identity: nu(phi + 0) = nu(phi)
  auto zero = PshExpr::zero(2);
  auto idrep = mc::hoelder_property_suite(e1, zero, make_radial(1.0, origin(2)), 23);
  CHECK(idrep.nu_sum.nu_hat == doctest::Approx(idrep.nu1.nu_hat).epsilon(0.08));
}

TEST_CASE("biholomorphic invariance under a shear") {
  auto e = parse("log(|z1|^1)", 2);
  PolyMap f;
  f.n_in = 2;
  f.comps.push_back(Poly::variable(2, 0) + Poly::variable(2, 1).pow(2));
  f.comps.push_back(Poly::variable(2, 1));
  auto rep = mc::biholo_invariance_check(e, f, 1.0, 31);
  CHECK(rep.ok);
  CHECK(rep.base.nu_hat == doctest::Approx(1.0).epsilon(0.07));
  CHECK(rep.composed.nu_hat == doctest::Approx(1.0).epsilon(0.07));
  // identity map: identical estimates for identical seeds
  auto idrep = mc::biholo_invariance_check(e, PolyMap::identity(2), 1.0, 32);
  CHECK(idrep.jacobian_abs == doctest::Approx(1.0));
}

TEST_CASE("biholo check rejects singular Jacobians") {
  auto e = parse("log(|z1|^1)", 2);
  PolyMap f;
  f.n_in = 2;
  f.comps.push_back(Poly::variable(2, 0));
  f.comps.push_back(Poly::variable(2, 0));  // rank 1
  CHECK_THROWS_AS(mc::biholo_invariance_check(e, f, 1.0, 7), std::invalid_argument);
}

TEST_CASE("levelset scan flags the singular slice") {
  auto e = parse("log(|z1|^1)", 2);
  std::vector<ComplexPoint> grid;
  for (double x : {-0.4, 0.0, 0.4}) {
    ComplexPoint g;
    g.coords = {cdouble(x, 0.0), cdouble(0.2, 0.0)};
    grid.push_back(g);
  }
  WeightSpec w = make_radial(1.0, origin(2));
  mc::McConfig cfg;
  cfg.samples = 4096;
  cfg.k_max = 14;
  auto pts = mc::levelset_scan(e, w, grid, 0.5, 41, cfg);
  CHECK_FALSE(pts[0].above);  // z1 = -0.4: smooth point
  CHECK(pts[1].above);        // z1 = 0: on the slice
  CHECK_FALSE(pts[2].above);
  // a level above everything flags nothing
  auto none = mc::levelset_scan(e, w, grid, 50.0, 42, cfg);
  for (const auto& p : none) CHECK_FALSE(p.above);
}

TEST_CASE("singularity shift: monomial with nu = 1 + delta diverges under (1-eps) psi") {
  // phi = log|z1 z2| at t = 1 has nu = 2 = 1 + delta with delta = 1; the
  // profile at s = 1 with weight (1 - eps) t stays divergent for small eps
  auto e = parse("log(|z1^1*z2^1|^1)", 2);
  for (double eps : {0.05, 0.15}) {
    auto p = mc::integral_profile(e, make_radial((1.0 - eps) * 1.0, origin(2)), 1.0, 4, 14, 8192,
                                  51);
    auto de = mc::divergence_exponent(p);
    const bool divergent = de.flagged || de.e <= 0.0;
    CHECK(divergent);
  }
}
