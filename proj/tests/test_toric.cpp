// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "lelong/rng.hpp"
#include "lelong/toric.hpp"

using namespace lelong;

namespace {
ToricForm sum_squares(int k, int n, Rat scale = Rat(1)) {
  ToricForm f;
  f.family = ToricForm::Family::SumSquares;
  f.k = k;
  f.n = n;
  f.scale = scale;
  return f;
}

ToricForm monomial(std::vector<int> alpha, int n, Rat scale = Rat(1)) {
  ToricForm f;
  f.family = ToricForm::Family::Monomial;
  f.alpha = std::move(alpha);
  f.k = static_cast<int>(f.alpha.size());
  f.n = n;
  f.scale = scale;
  return f;
}

ToricForm cusp(Rat a, Rat scale = Rat(1)) {
  ToricForm f;
  f.family = ToricForm::Family::TwoVarCusp;
  f.cusp_a = a;
  f.n = 2;
  f.k = 2;
  f.scale = scale;
  return f;
}

std::vector<Rat> grid(int n, Rat step) {
  std::vector<Rat> g;
  for (Rat t(0); t < Rat(n); t = t + step) g.push_back(t);
  return g;
}
}  // namespace

TEST_CASE("nu_exact reproduces the closed-form family values") {
  CHECK(*nu_exact(sum_squares(2, 3), Rat(0)).rat == Rat(1, 2));
  CHECK(*nu_exact(monomial({1, 1}, 2), Rat(1)).rat == Rat(2));
  CHECK(*nu_exact(cusp(Rat(3)), Rat(0)).rat == Rat(3, 2));  // 2/(1 + 1/3)
  CHECK(*nu_exact(cusp(Rat(3)), Rat(1)).rat == Rat(2));
  // scaling, property (1)
  CHECK(*nu_exact(sum_squares(1, 1, Rat(2)), Rat(0)).rat == Rat(2));
  // interpolation point
  CHECK(*nu_exact(sum_squares(2, 3), Rat(3, 2)).rat ==
        Rat::max(Rat(1, 2), Rat(1) / (Rat(3) - Rat(3, 2))));
}

TEST_CASE("nu_exact validates its domain") {
  CHECK_THROWS(nu_exact(sum_squares(2, 2), Rat(2)));   // t = n rejected
  CHECK_THROWS(nu_exact(sum_squares(2, 2), Rat(-1)));  // t < 0 rejected
  CHECK_THROWS(nu_exact(cusp(Rat(3)), Rat(1, 2)));     // cusp pinned to t in {0, 1}
}

TEST_CASE("skoda chain holds exactly with the documented sharpness cases") {
  // sharp left: SumSquares(k=1, n=2) at t = n - k = 1
  {
    auto f = sum_squares(1, 2);
    Rat lhs = *nu_exact(f, Rat(1)).rat * (Rat(2) - Rat(1));
    CHECK(lhs == *nu_exact(f, Rat(1)).rat);
    CHECK(*nu_exact(f, Rat(1)).rat == Rat(1));
    auto rep = skoda_chain_check(f, grid(2, Rat(1, 20)));
    CHECK(rep.ok());
    CHECK(rep.checked > 30);
  }
  // sharp right: Monomial with k = n at t = 0: (n-t) nu_t = n nu_0 exactly
  {
    auto f = monomial({2, 1}, 2);
    Rat left = (Rat(2) - Rat(0)) * *nu_exact(f, Rat(0)).rat;
    Rat right = Rat(2) * *nu_exact(f, Rat(0)).rat;
    CHECK(left == right);
    CHECK(skoda_chain_check(f, grid(2, Rat(1, 20))).ok());
  }
  // the 5-point grid from the worked example
  {
    auto f = sum_squares(2, 3);
    std::vector<Rat> g = {Rat(0), Rat(1, 2), Rat(1), Rat(3, 2), Rat(2)};
    CHECK(skoda_chain_check(f, g).ok());
  }
}

TEST_CASE("skoda chain and convexity hold over randomized toric forms") {
  Rng rng(5, {});
  int done = 0;
  while (done < 60) {
    const int n = 1 + static_cast<int>(rng.next_below(6));
    ToricForm f;
    if (rng.next_below(2) == 0) {
      f = sum_squares(1 + static_cast<int>(rng.next_below(n)), n,
                      Rat(1 + static_cast<int>(rng.next_below(8)), 2));
    } else {
      std::vector<int> alpha;
      const int k = 1 + static_cast<int>(rng.next_below(n));
      for (int i = 0; i < k; ++i) alpha.push_back(1 + static_cast<int>(rng.next_below(5)));
      std::sort(alpha.rbegin(), alpha.rend());
      f = monomial(alpha, n, Rat(1 + static_cast<int>(rng.next_below(8)), 2));
    }
    auto rep = skoda_chain_check(f, grid(n, Rat(1, 20)));
    CAPTURE(f.str());
    CHECK(rep.ok());
    ++done;
  }
}

TEST_CASE("nu_exact is monotone nondecreasing and convex in t") {
  auto f = monomial({3, 2}, 3);
  Rat prev(-1);
  auto g = grid(3, Rat(1, 20));
  for (const auto& t : g) {
    Rat v = *nu_exact(f, t).rat;
    CHECK(prev <= v);
    prev = v;
  }
}

TEST_CASE("property (5) calculator") {
  CHECK(property5_bound(0.5, 1.0) == doctest::Approx(1.0));
  CHECK(property5_bound(2.0, 1.0) == 0.0);
  CHECK(property5_bound(1.0, 1.0) == std::numeric_limits<double>::infinity());
  CHECK_THROWS(property5_bound(0.0, 1.0));
  CHECK_THROWS(property5_bound(1.0, -2.0));
}

TEST_CASE("relative type against the radial weight") {
  CHECK(relative_type_radial(sum_squares(2, 3), 1.0) == doctest::Approx(1.0));
  CHECK(relative_type_radial(monomial({2, 3}, 2), 1.0) == doctest::Approx(5.0));
  // homogeneity in t
  CHECK(relative_type_radial(monomial({2, 3}, 2), 2.0) ==
        doctest::Approx(0.5 * relative_type_radial(monomial({2, 3}, 2), 1.0)));
  CHECK(relative_type_radial(cusp(Rat(3)), 1.0) == doctest::Approx(2.0));
  CHECK_THROWS(relative_type_radial(sum_squares(1, 2), 0.0));
}

TEST_CASE("scaling law nu(c phi) = c nu(phi) in exact arithmetic") {
  Rng rng(9, {});
  for (int i = 0; i < 40; ++i) {
    const int n = 2 + static_cast<int>(rng.next_below(3));
    auto f = sum_squares(1 + static_cast<int>(rng.next_below(n)), n);
    Rat c(1 + static_cast<int>(rng.next_below(12)), 4);
    auto fc = f;
    fc.scale = f.scale * c;
    Rat t(static_cast<int>(rng.next_below(2 * n - 1)), 2);
    CHECK(*nu_exact(fc, t).rat == c * *nu_exact(f, t).rat);
  }
}
