// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "lelong/eval_plan.hpp"
#include "lelong/parser.hpp"
#include "lelong/rng.hpp"
#include "lelong/toric.hpp"

using namespace lelong;

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<cdouble> random_point(Rng& rng, int n, double scale = 1.0) {
  std::vector<cdouble> z;
  for (int i = 0; i < n; ++i)
    z.push_back(scale * cdouble(rng.next_double() - 0.5, rng.next_double() - 0.5));
  return z;
}

// random grammar-level AST with decimal-representable constants
ExprPtr random_expr(Rng& rng, int n, int depth) {
  if (depth == 0 || rng.next_double() < 0.4) {
    int nterms = 1 + static_cast<int>(rng.next_below(3));
    std::vector<PowTerm> terms;
    for (int t = 0; t < nterms; ++t) {
      Poly p(n);
      int nmono = 1 + static_cast<int>(rng.next_below(2));
      for (int m = 0; m < nmono; ++m) {
        std::vector<int> e(n, 0);
        for (int v = 0; v < n; ++v) e[v] = static_cast<int>(rng.next_below(3));
        double cr = (1 + rng.next_below(8)) / 4.0;
        double ci = rng.next_below(3) == 0 ? static_cast<double>(rng.next_below(3)) : 0.0;
        p.add_term(std::move(e), cdouble(cr, ci));
      }
      if (p.is_zero()) p.add_term(std::vector<int>(n, 0), cdouble(1.0));
      terms.push_back({std::move(p), Rat(1 + static_cast<int>(rng.next_below(8)), 2)});
    }
    return PshExpr::log_sum_pow(std::move(terms));
  }
  switch (rng.next_below(3)) {
    case 0:
      return PshExpr::scale(Rat(1 + static_cast<int>(rng.next_below(12)), 4),
                            random_expr(rng, n, depth - 1));
    case 1: {
      std::vector<ExprPtr> ch;
      int k = 2 + static_cast<int>(rng.next_below(2));
      for (int i = 0; i < k; ++i) ch.push_back(random_expr(rng, n, depth - 1));
      return PshExpr::sum(std::move(ch));
    }
    default: {
      std::vector<ExprPtr> ch;
      int k = 2 + static_cast<int>(rng.next_below(2));
      for (int i = 0; i < k; ++i) ch.push_back(random_expr(rng, n, depth - 1));
      return PshExpr::max(std::move(ch));
    }
  }
}
}  // namespace

TEST_CASE("parse maps the documented examples to the right shapes") {
  auto e1 = parse("0.5*log(|z1|^2 + |z2|^2)");
  CHECK(e1->kind() == PshExpr::Kind::Scale);
  CHECK(e1->scale_factor() == Rat(1, 2));
  auto f1 = classify_toric(e1);
  REQUIRE(f1.has_value());
  CHECK(f1->family == ToricForm::Family::SumSquares);
  CHECK(f1->k == 2);
  CHECK(f1->n == 2);
  CHECK(f1->scale == Rat(1));  // the 1/2 folds into the half-log convention

  auto e2 = parse("log(|z1^2*z2|^2)");
  REQUIRE(e2->kind() == PshExpr::Kind::LogSumPow);
  REQUIRE(e2->terms().size() == 1);
  CHECK(e2->terms()[0].alpha == Rat(2));
  CHECK(e2->terms()[0].poly.total_degree() == 3);

  auto e3 = parse("max(log(|z1|^2), 2*log(|z2|^2))");
  CHECK(e3->kind() == PshExpr::Kind::Max);
  CHECK(e3->children().size() == 2);
}

TEST_CASE("parse rejects the documented error classes") {
  CHECK_THROWS_AS(parse("log(|z1|^0)"), ParseError);        // nonpositive exponent
  CHECK_THROWS_AS(parse("0*log(|z1|^2)"), ParseError);      // nonpositive scale
  CHECK_THROWS_AS(parse("log(|z1|^2"), ParseError);         // syntax
  CHECK_THROWS_AS(parse("frob(|z1|^2)"), ParseError);       // unknown function
  CHECK_THROWS_AS(parse("log(|z3|^2)", 2), ParseError);     // variable beyond dimension
  try {
    parse("log(|z1|^2) + ");
  } catch (const ParseError& pe) {
    CHECK(pe.line == 1);
    CHECK(pe.col > 1);
  }
}

TEST_CASE("evaluate matches the worked values") {
  auto e = parse("0.5*log(|z1|^2+|z2|^2)");
  CHECK(evaluate(*e, std::vector<cdouble>{{3, 0}, {4, 0}}) == doctest::Approx(std::log(5.0)));

  auto mono = parse("log(|z1*z2|^1)");
  CHECK(evaluate(*mono, std::vector<cdouble>{{1, 0}, {0, 0}}) == kNegInf);

  auto lz = parse("log(|z1|^1)", 1);
  auto sc = PshExpr::scale(Rat(2), lz);
  CHECK(evaluate(*sc, std::vector<cdouble>{{std::exp(1.0), 0}}) == doctest::Approx(2.0));
}

TEST_CASE("compose substitutes polynomial maps") {
  auto lz = parse("log(|z1|^1)", 2);
  // shear (z1 + z2^2, z2)
  PolyMap f;
  f.n_in = 2;
  f.comps.push_back(Poly::variable(2, 0) + Poly::variable(2, 1).pow(2));
  f.comps.push_back(Poly::variable(2, 1));
  auto c = compose(lz, f);
  CHECK(evaluate(*c, std::vector<cdouble>{{1, 0}, {1, 0}}) == doctest::Approx(std::log(2.0)));

  // identity: equal on random points
  Rng rng(7, {});
  auto e = random_expr(rng, 2, 2);
  auto id = compose(e, PolyMap::identity(2));
  for (int i = 0; i < 100; ++i) {
    auto z = random_point(rng, 2);
    double a = evaluate(*e, z), b = evaluate(*id, z);
    if (a == kNegInf)
      CHECK(b == kNegInf);
    else
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }

  // the coordinate-power substitution z1 -> z1^3
  auto l1 = parse("log(|z1|^1)", 1);
  auto p3 = compose(l1, PolyMap::coordinate_powers({3}));
  CHECK(evaluate(*p3, std::vector<cdouble>{{0.5, 0}}) == doctest::Approx(3.0 * std::log(0.5)));
}

TEST_CASE("compose evaluates pointwise as expr(f(z)) on random maps") {
  Rng rng(11, {});
  for (int trial = 0; trial < 20; ++trial) {
    auto e = random_expr(rng, 2, 2);
    PolyMap f;
    f.n_in = 2;
    for (int c = 0; c < 2; ++c) {
      Poly p(2);
      for (int m = 0; m < 2; ++m) {
        std::vector<int> ex(2, 0);
        ex[rng.next_below(2)] = 1 + static_cast<int>(rng.next_below(2));
        p.add_term(std::move(ex), cdouble(rng.next_double() - 0.5, rng.next_double() - 0.5));
      }
      f.comps.push_back(std::move(p));
    }
    auto comp = compose(e, f);
    auto flat = flatten(comp);
    for (int i = 0; i < 10; ++i) {
      auto z = random_point(rng, 2);
      auto fz = f.eval(z);
      double direct = evaluate(*e, fz);
      double viacomp = evaluate(*comp, z);
      double viaflat = evaluate(*flat, z);
      if (direct == kNegInf) {
        CHECK(viacomp == kNegInf);
      } else {
        CHECK(viacomp == doctest::Approx(direct).epsilon(1e-10));
        CHECK(viaflat == doctest::Approx(direct).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("parse(print(e)) is a structural fixed point on generated ASTs") {
  Rng rng(23, {});
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng.next_below(3));
    auto e = random_expr(rng, n, 2);
    std::string text = print(*e);
    ExprPtr back;
    CAPTURE(text);
    REQUIRE_NOTHROW(back = parse(text, n));
    CHECK(back->equals(*e));
  }
}

TEST_CASE("scale law holds exactly for evaluation") {
  Rng rng(31, {});
  auto e = random_expr(rng, 2, 2);
  auto s = PshExpr::scale(Rat(3, 2), e);
  for (int i = 0; i < 100; ++i) {
    auto z = random_point(rng, 2);
    double a = evaluate(*e, z);
    if (a == kNegInf)
      CHECK(evaluate(*s, z) == kNegInf);
    else
      CHECK(evaluate(*s, z) == doctest::Approx(1.5 * a));
  }
}

TEST_CASE("classify_toric recognizes the families and refuses the rest") {
  auto f1 = classify_toric(parse("0.5*log(|z1|^2+|z2|^2+|z3|^2)", 4));
  REQUIRE(f1);
  CHECK(f1->family == ToricForm::Family::SumSquares);
  CHECK(f1->k == 3);
  CHECK(f1->n == 4);

  auto f2 = classify_toric(parse("log(|z1^2*z2^3|^1)"));
  REQUIRE(f2);
  CHECK(f2->family == ToricForm::Family::Monomial);
  CHECK(f2->alpha == std::vector<int>{3, 2});
  CHECK(f2->scale == Rat(1));

  auto f3 = classify_toric(parse("log(|z1|^2 + |z2|^6)"));
  REQUIRE(f3);
  CHECK(f3->family == ToricForm::Family::TwoVarCusp);
  CHECK(f3->cusp_a == Rat(3));

  CHECK_FALSE(classify_toric(parse("log(|z1+z2|^2)")));
  CHECK_FALSE(classify_toric(parse("max(log(|z1|^2), log(|z2|^2))")));
  CHECK_FALSE(classify_toric(parse("log(|z1|^2 + |z1|^4)")));  // repeated variable
}

TEST_CASE("classified forms evaluate identically to their source expressions") {
  Rng rng(41, {});
  const char* sources[] = {"0.5*log(|z1|^2+|z2|^2)", "log(|z1^2*z2|^2)",
                           "log(|z1|^2 + |z2|^6)", "2*log(|z1^1*z2^1|^2)",
                           "0.25*log(|z2|^2+|z1|^2)"};
  for (const char* src : sources) {
    auto e = parse(src, 2);
    auto form = classify_toric(e);
    REQUIRE(form);
    auto back = form->to_expr();
    for (int i = 0; i < 100; ++i) {
      auto z = random_point(rng, 2);
      CHECK(evaluate(*e, z) == doctest::Approx(evaluate(*back, z)).epsilon(1e-12));
    }
  }
}

TEST_CASE("block evaluation agrees with scalar evaluation") {
  Rng rng(53, {});
  for (int trial = 0; trial < 10; ++trial) {
    int n = 1 + static_cast<int>(rng.next_below(3));
    auto e = random_expr(rng, n, 2);
    EvalPlan plan(e);
    std::vector<std::vector<cdouble>> pts;
    for (int i = 0; i < 37; ++i) pts.push_back(random_point(rng, n));
    std::vector<double> out;
    plan.run_points(pts, out);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double ref = evaluate(*e, pts[i]);
      if (ref == kNegInf)
        CHECK(out[i] < -1e300);
      else
        CHECK(out[i] == doctest::Approx(ref).epsilon(1e-10));
    }
  }
}
