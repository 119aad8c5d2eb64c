// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/toric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lelong {

ExprPtr ToricForm::to_expr() const {
  switch (family) {
    case Family::SumSquares: {
      std::vector<PowTerm> terms;
      for (int i = 0; i < k; ++i) terms.push_back({Poly::variable(n, i), Rat(2)});
      return scaled(scale * Rat(1, 2), PshExpr::log_sum_pow(std::move(terms)));
    }
    case Family::Monomial: {
      Poly mono = Poly::constant(n, 1.0);
      for (std::size_t i = 0; i < alpha.size(); ++i)
        mono = mono * Poly::variable(n, static_cast<int>(i)).pow(alpha[i]);
      return scaled(scale, PshExpr::log_sum_pow({{mono, Rat(1)}}));
    }
    case Family::TwoVarCusp: {
      std::vector<PowTerm> terms;
      terms.push_back({Poly::variable(2, 0), Rat(2)});
      terms.push_back({Poly::variable(2, 1), Rat(2) * cusp_a});
      return scaled(scale, PshExpr::log_sum_pow(std::move(terms)));
    }
  }
  throw std::logic_error("ToricForm::to_expr: bad family");
}

std::string ToricForm::str() const {
  std::ostringstream os;
  switch (family) {
    case Family::SumSquares:
      os << "SumSquares(k=" << k << ",n=" << n << ")";
      break;
    case Family::Monomial: {
      os << "Monomial(alpha=(";
      for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? "," : "") << alpha[i];
      os << "),n=" << n << ")";
      break;
    }
    case Family::TwoVarCusp:
      os << "TwoVarCusp(a=" << cusp_a.str() << ")";
      break;
  }
  if (!(scale == Rat(1))) os << "*" << scale.str();
  return os.str();
}

namespace {

bool unit_modulus(cdouble c) {
  return std::abs(std::norm(c) - 1.0) < 1e-15;
}

// variable index when poly == c * z_i with |c| = 1, else -1
int single_variable(const Poly& p) {
  std::vector<int> e;
  cdouble c;
  if (!p.single_monomial(e, c) || !unit_modulus(c)) return -1;
  int idx = -1;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (e[v] == 1 && idx < 0)
      idx = static_cast<int>(v);
    else if (e[v] != 0)
      return -1;
  }
  return idx;
}

}  // namespace

std::optional<ToricForm> classify_toric(const ExprPtr& expr) {
  ExprPtr e = flatten(expr);
  Rat outer(1);
  while (e->kind() == PshExpr::Kind::Scale) {
    outer = outer * e->scale_factor();
    e = e->children()[0];
  }
  if (e->kind() != PshExpr::Kind::LogSumPow) return std::nullopt;
  const auto& terms = e->terms();
  const int n = e->arity();

  // SumSquares: >= 2 distinct plain variables, all exponents 2
  if (terms.size() >= 2) {
    bool all_sq = true;
    std::vector<int> vars;
    for (const auto& t : terms) {
      int v = single_variable(t.poly);
      if (v < 0 || !(t.alpha == Rat(2))) {
        all_sq = false;
        break;
      }
      vars.push_back(v);
    }
    std::sort(vars.begin(), vars.end());
    if (all_sq && std::adjacent_find(vars.begin(), vars.end()) == vars.end()) {
      ToricForm f;
      f.family = ToricForm::Family::SumSquares;
      f.k = static_cast<int>(vars.size());
      f.n = n;
      f.scale = Rat(2) * outer;  // log(sum) = 2 * (1/2) log(sum)
      return f;
    }
  }

  // Monomial: one term, |unit| * z^alpha, alpha_i >= 1 on the used variables
  if (terms.size() == 1) {
    std::vector<int> exps;
    cdouble c;
    if (terms[0].poly.single_monomial(exps, c) && unit_modulus(c)) {
      std::vector<int> alpha;
      for (int ev : exps)
        if (ev > 0) alpha.push_back(ev);
      if (!alpha.empty()) {
        std::sort(alpha.rbegin(), alpha.rend());
        ToricForm f;
        f.family = ToricForm::Family::Monomial;
        f.k = static_cast<int>(alpha.size());
        f.n = n;
        f.alpha = std::move(alpha);
        f.scale = outer * terms[0].alpha;
        return f;
      }
    }
  }

  // TwoVarCusp: n = 2, two distinct plain variables, exponents {2, 2a}, a != 1
  if (n == 2 && terms.size() == 2) {
    int v0 = single_variable(terms[0].poly);
    int v1 = single_variable(terms[1].poly);
    if (v0 >= 0 && v1 >= 0 && v0 != v1) {
      Rat a0 = terms[0].alpha, a1 = terms[1].alpha;
      std::optional<Rat> a;
      if (a0 == Rat(2) && !(a1 == Rat(2)))
        a = a1 / Rat(2);
      else if (a1 == Rat(2) && !(a0 == Rat(2)))
        a = a0 / Rat(2);
      if (a && Rat(0) < *a) {
        ToricForm f;
        f.family = ToricForm::Family::TwoVarCusp;
        f.n = 2;
        f.k = 2;
        f.cusp_a = *a;
        f.scale = outer;
        return f;
      }
    }
  }
  return std::nullopt;
}

ExactValue nu_exact(const ToricForm& form, const Rat& t) {
  if (t < Rat(0) || !(t < Rat(form.n)))
    throw std::invalid_argument("nu_exact: t outside [0, n)");
  switch (form.family) {
    case ToricForm::Family::SumSquares: {
      Rat v = Rat::max(Rat(1, form.k), Rat(1) / (Rat(form.n) - t));
      return ExactValue::from_rat(form.scale * v);
    }
    case ToricForm::Family::Monomial: {
      int s = std::accumulate(form.alpha.begin(), form.alpha.end(), 0);
      Rat v = Rat::max(Rat(s, form.k), Rat(s) / (Rat(form.n) - t));
      return ExactValue::from_rat(form.scale * v);
    }
    case ToricForm::Family::TwoVarCusp: {
      if (t == Rat(0)) {
        // integrability index 2a/(a+1)
        Rat v = Rat(2) * form.cusp_a / (form.cusp_a + Rat(1));
        return ExactValue::from_rat(form.scale * v);
      }
      if (t == Rat(1)) {
        Rat v = Rat(2) * Rat::min(Rat(1), form.cusp_a);
        return ExactValue::from_rat(form.scale * v);
      }
      throw std::invalid_argument("nu_exact: TwoVarCusp has closed form only at t in {0, 1}");
    }
  }
  throw std::logic_error("nu_exact: bad family");
}

ExactValue nu_exact(const ToricForm& form, double t) {
  // exact when t is a small rational; otherwise evaluate the same formulas
  // in floating point
  for (int den = 1; den <= 1000; ++den) {
    double scaled_t = t * den;
    double r = std::round(scaled_t);
    if (std::abs(scaled_t - r) < 1e-12 && std::abs(r) < 1e15)
      return nu_exact(form, Rat(static_cast<std::int64_t>(r), den));
  }
  if (!(t >= 0.0) || !(t < form.n)) throw std::invalid_argument("nu_exact: t outside [0, n)");
  switch (form.family) {
    case ToricForm::Family::SumSquares:
      return ExactValue::from_double(form.scale.to_double() *
                                     std::max(1.0 / form.k, 1.0 / (form.n - t)));
    case ToricForm::Family::Monomial: {
      double s = std::accumulate(form.alpha.begin(), form.alpha.end(), 0);
      return ExactValue::from_double(form.scale.to_double() *
                                     std::max(s / form.k, s / (form.n - t)));
    }
    case ToricForm::Family::TwoVarCusp:
      throw std::invalid_argument("nu_exact: TwoVarCusp has closed form only at t in {0, 1}");
  }
  throw std::logic_error("nu_exact: bad family");
}

SkodaReport skoda_chain_check(const ToricForm& form, const std::vector<Rat>& t_grid) {
  SkodaReport rep;
  const Rat n(form.n);
  std::vector<Rat> grid = t_grid;
  if (form.family == ToricForm::Family::TwoVarCusp) {
    // closed forms exist only at t in {0, 1}
    grid.clear();
    for (const Rat& t : t_grid)
      if (t == Rat(0) || t == Rat(1)) grid.push_back(t);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty()) return rep;

  auto nu = [&](const Rat& t) { return *nu_exact(form, t).rat; };
  const Rat nu0 = nu(Rat(0));
  const Rat nu_top = nu(n - Rat(1));

  for (const Rat& t : grid) {
    ++rep.checked;
    Rat v = nu(t);
    Rat mid = (n - t) * v;
    if (!(nu0 <= nu_top) || !(nu_top <= mid) || !(mid <= n * nu0)) {
      rep.violations.push_back({t, "chain nu00 <= nu0(n-1) <= (n-t)nu0t <= n nu00 fails"});
    }
  }
  // (n - t) nu_t nonincreasing along the grid
  for (std::size_t i = 1; i < grid.size(); ++i) {
    Rat prev = (n - grid[i - 1]) * nu(grid[i - 1]);
    Rat cur = (n - grid[i]) * nu(grid[i]);
    if (!(cur <= prev)) rep.violations.push_back({grid[i], "(n-t) nu_t increased"});
  }
  // midpoint convexity of nu_t and concavity of 1/nu_t on equally spaced triples
  for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
    if (!(grid[i + 1] - grid[i] == grid[i + 2] - grid[i + 1])) continue;
    Rat a = nu(grid[i]), b = nu(grid[i + 1]), c = nu(grid[i + 2]);
    if (!(Rat(2) * b <= a + c)) rep.violations.push_back({grid[i + 1], "nu_t not midpoint convex"});
    if (Rat(0) < a && Rat(0) < b && Rat(0) < c) {
      if (!(Rat(1) / a + Rat(1) / c <= Rat(2) / b))
        rep.violations.push_back({grid[i + 1], "1/nu_t not midpoint concave"});
    }
  }
  return rep;
}

double property5_bound(double nu0, double sigma) {
  if (!(nu0 > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("property5_bound: inputs must be positive");
  if (nu0 > sigma) return 0.0;
  if (nu0 == sigma) return std::numeric_limits<double>::infinity();
  return nu0 / (1.0 - nu0 / sigma);
}

double relative_type_radial(const ToricForm& form, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("relative_type_radial: t must be positive");
  double classical = 0.0;
  switch (form.family) {
    case ToricForm::Family::SumSquares:
      classical = 1.0;
      break;
    case ToricForm::Family::Monomial:
      classical = std::accumulate(form.alpha.begin(), form.alpha.end(), 0);
      break;
    case ToricForm::Family::TwoVarCusp:
      classical = 2.0 * std::min(1.0, form.cusp_a.to_double());
      break;
  }
  return form.scale.to_double() * classical / t;
}

}  // namespace lelong
