// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lelong/json_io.hpp"
#include "lelong/parser.hpp"
#include "lelong/weights.hpp"

using namespace lelong;

namespace {
ComplexPoint origin(int n) {
  ComplexPoint a;
  a.coords.assign(n, cdouble(0.0));
  return a;
}
}  // namespace

TEST_CASE("make_radial enforces the integrability range") {
  auto a = origin(2);
  CHECK_NOTHROW(make_radial(0.0, a));          // the integrability index weight
  CHECK_NOTHROW(make_radial(1.0, a));          // classical Lelong weight at n = 2
  CHECK_THROWS(make_radial(2.0, a));           // t = n rejected
  CHECK_THROWS(make_radial(-0.5, a));
  auto w = make_radial(1.5, a);
  CHECK(w.t == 1.5);
  CHECK(w.params.l == 1.5);
}

TEST_CASE("audit decay exponent matches the radial prediction") {
  for (double t : {0.0, 0.5, 1.5}) {
    auto w = make_radial(t, origin(2));
    auto rep = audit_admissibility(w, 17, 4096);
    CHECK(rep.radial_shortcut);
    CHECK(rep.integrability_margin_ok);
    CHECK(rep.decay_predicted == doctest::Approx(4.0 - 2.0 * t * (1.0 + w.params.tau)));
    CHECK(std::abs(rep.decay_exponent - rep.decay_predicted) <=
          std::max(3.0 * rep.decay_exponent_se, 0.1));
    if (t > 0) CHECK(rep.lelong_estimate == doctest::Approx(t).epsilon(0.05));
  }
}

TEST_CASE("audit is deterministic for fixed inputs") {
  auto psi = parse("log(|z1|^1+|z2|^1)", 2);
  AdmissibilityParams p;
  p.alpha = 1.0;
  p.l = 1.0;
  p.M = 1.5;
  p.tau = 0.3;
  auto w = make_expr_weight(psi, origin(2), p);
  auto r1 = audit_admissibility(w, 5, 2048);
  auto r2 = audit_admissibility(w, 5, 2048);
  CHECK(describe(r1).dump() == describe(r2).dump());
  auto r3 = audit_admissibility(w, 6, 2048);
  CHECK(describe(r1).dump() != describe(r3).dump());
}

TEST_CASE("the admissible example log(|z1| + |z2|) passes the audit") {
  auto psi = parse("log(|z1|^1+|z2|^1)", 2);
  AdmissibilityParams p;
  p.alpha = 1.0;
  p.l = 1.0;
  p.M = 1.5;  // Lojasiewicz-type bound: psi >= M log|z| holds with M slightly above 1
  p.tau = 0.4;
  auto w = make_expr_weight(psi, origin(2), p);
  auto rep = audit_admissibility(w, 23, 4096);
  CHECK(rep.hoelder_ok);
  CHECK(rep.lower_bound_ok);
  CHECK(rep.integrability_margin_ok);
  CHECK(rep.lelong_estimate == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("lower bound detection: declared M below the true ratio fails") {
  // psi = log|z| has psi/log|z| = 1; M = 2 admits it, M = 0.5 does not
  auto psi = parse("0.5*log(|z1|^2+|z2|^2)", 2);
  AdmissibilityParams ok_params;
  ok_params.M = 2.0;
  ok_params.l = 1.0;
  ok_params.tau = 0.4;
  auto rep_ok = audit_admissibility(make_expr_weight(psi, origin(2), ok_params), 31, 4096);
  CHECK(rep_ok.lower_bound_ok);
  CHECK(rep_ok.worst_ratio == doctest::Approx(1.0).epsilon(0.02));

  AdmissibilityParams bad_params = ok_params;
  bad_params.M = 0.5;
  auto rep_bad = audit_admissibility(make_expr_weight(psi, origin(2), bad_params), 31, 4096);
  CHECK_FALSE(rep_bad.lower_bound_ok);
}

TEST_CASE("a weight without isolated singularity fails the lower bound") {
  // psi = log|z1| dives along the z2 axis: no M works
  auto psi = parse("log(|z1|^1)", 2);
  AdmissibilityParams p;
  p.M = 5.0;
  p.l = 1.0;
  p.tau = 0.4;
  auto rep = audit_admissibility(make_expr_weight(psi, origin(2), p), 37, 4096);
  CHECK_FALSE(rep.lower_bound_ok);
  CHECK(rep.worst_ratio > 5.0);
}
