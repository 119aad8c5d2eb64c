// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Closed-form generalized Lelong numbers for the three toric families, and
// the exact property checks built on them. SumSquares and Monomial values
// are exact rationals; the cusp family is rational whenever its parameter
// is, which covers everything the grammar can produce.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lelong/expr.hpp"
#include "lelong/rational.hpp"

namespace lelong {

struct ToricForm {
  enum class Family { SumSquares, Monomial, TwoVarCusp };
  Family family;
  int k = 1;               // SumSquares: squared variables; Monomial: variable count
  int n = 1;               // ambient dimension
  std::vector<int> alpha;  // Monomial exponents, sorted descending
  Rat cusp_a{1};           // TwoVarCusp parameter a
  Rat scale{1};

  // value conventions: SumSquares = scale * (1/2) log(sum |z_i|^2),
  // Monomial = scale * log|z^alpha|, TwoVarCusp = scale * log(|z_i|^2 + |z_j|^{2a})
  ExprPtr to_expr() const;
  std::string str() const;
};

struct ExactValue {
  double value = 0.0;
  std::optional<Rat> rat;  // set when the value is exactly rational

  static ExactValue from_rat(Rat r) { return {r.to_double(), r}; }
  static ExactValue from_double(double v) { return {v, std::nullopt}; }
};

// syntactic recognition up to scale folding and variable reordering
std::optional<ToricForm> classify_toric(const ExprPtr& expr);

// nu_{0,t} for the family; throws std::invalid_argument outside the
// supported (family, t) combinations
ExactValue nu_exact(const ToricForm& form, const Rat& t);
ExactValue nu_exact(const ToricForm& form, double t);

struct SkodaViolation {
  Rat t;
  std::string what;
};

struct SkodaReport {
  int checked = 0;
  std::vector<SkodaViolation> violations;
  bool ok() const { return violations.empty(); }
};

// nu_{0,0} <= nu_{0,n-1} <= (n-t) nu_{0,t} <= n nu_{0,0} on the grid, plus
// monotonicity of (n-t) nu_t and midpoint convexity of nu_t / concavity of
// 1/nu_t, all in exact arithmetic
SkodaReport skoda_chain_check(const ToricForm& form, const std::vector<Rat>& t_grid);

// property (5) calculator: nu0/(1 - nu0/sigma) when nu0 < sigma, 0 when
// nu0 > sigma, +inf sentinel at equality
double property5_bound(double nu0, double sigma);

// relative type of the family with respect to t log|z|, t > 0
double relative_type_radial(const ToricForm& form, double t);

}  // namespace lelong
