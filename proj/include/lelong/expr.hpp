// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Plurisubharmonic expressions. The constructors are exactly the
// psh-preserving ones: log of sums of |polynomial|^alpha with alpha > 0,
// positive scaling, sums, max, and holomorphic pre-composition, so every
// representable function is psh by construction. Evaluation returns a real
// value or -infinity; -infinity is a legitimate result, not an error.
#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lelong/polynomial.hpp"
#include "lelong/rational.hpp"

namespace lelong {

struct ComplexPoint {
  std::vector<cdouble> coords;
  int dim() const { return static_cast<int>(coords.size()); }
};

struct PowTerm {
  Poly poly;
  Rat alpha;  // exponent on |poly|, > 0
};

class PshExpr {
 public:
  enum class Kind { LogSumPow, Scale, Sum, Max, Compose };
  using Ptr = std::shared_ptr<const PshExpr>;

  static Ptr log_sum_pow(std::vector<PowTerm> terms);
  static Ptr scale(Rat c, Ptr child);
  static Ptr sum(std::vector<Ptr> children, int arity_if_empty = 1);
  static Ptr max(std::vector<Ptr> children);
  static Ptr composed(Ptr inner, PolyMap map);
  static Ptr zero(int arity) { return sum({}, arity); }

  Kind kind() const { return kind_; }
  int arity() const { return arity_; }
  const std::vector<PowTerm>& terms() const { return terms_; }
  const Rat& scale_factor() const { return scale_; }
  const std::vector<Ptr>& children() const { return children_; }
  const Ptr& inner() const { return inner_; }
  const PolyMap& map() const { return map_; }

  bool is_zero() const { return kind_ == Kind::Sum && children_.empty(); }

  bool equals(const PshExpr& o) const;

 private:
  PshExpr() = default;
  Kind kind_ = Kind::Sum;
  int arity_ = 1;
  std::vector<PowTerm> terms_;
  Rat scale_{1};
  std::vector<Ptr> children_;
  Ptr inner_;
  PolyMap map_;
};

using ExprPtr = PshExpr::Ptr;

// phi(z), in R union {-inf}
double evaluate(const PshExpr& e, std::span<const cdouble> z);
double evaluate(const PshExpr& e, const ComplexPoint& z);

// expr o f as a Compose node; f.n_out must equal expr arity
ExprPtr compose(ExprPtr expr, PolyMap f);

// push Compose nodes into the polynomials; result uses only grammar nodes
ExprPtr flatten(ExprPtr expr);

// grammar-conforming rendering; parse(print(e)) reproduces flatten(e)
std::string print(const PshExpr& e);

// scale the whole expression by a positive rational
ExprPtr scaled(Rat c, ExprPtr e);

}  // namespace lelong
