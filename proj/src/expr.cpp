// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lelong {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

ExprPtr PshExpr::log_sum_pow(std::vector<PowTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("log_sum_pow: needs at least one term");
  const int n = terms[0].poly.nvars();
  for (const auto& t : terms) {
    if (t.poly.nvars() != n) throw std::invalid_argument("log_sum_pow: mixed arities");
    if (!(Rat(0) < t.alpha)) throw std::invalid_argument("log_sum_pow: exponent must be positive");
    if (t.poly.is_zero()) throw std::invalid_argument("log_sum_pow: zero polynomial term");
  }
  auto e = std::shared_ptr<PshExpr>(new PshExpr());
  e->kind_ = Kind::LogSumPow;
  e->arity_ = n;
  e->terms_ = std::move(terms);
  return e;
}

ExprPtr PshExpr::scale(Rat c, Ptr child) {
  if (!(Rat(0) < c)) throw std::invalid_argument("scale: factor must be positive");
  if (!child) throw std::invalid_argument("scale: null child");
  auto e = std::shared_ptr<PshExpr>(new PshExpr());
  e->kind_ = Kind::Scale;
  e->arity_ = child->arity();
  e->scale_ = c;
  e->children_ = {std::move(child)};
  return e;
}

ExprPtr PshExpr::sum(std::vector<Ptr> children, int arity_if_empty) {
  auto e = std::shared_ptr<PshExpr>(new PshExpr());
  e->kind_ = Kind::Sum;
  if (children.empty()) {
    e->arity_ = arity_if_empty;
  } else {
    e->arity_ = children[0]->arity();
    for (const auto& c : children)
      if (c->arity() != e->arity_) throw std::invalid_argument("sum: mixed arities");
  }
  e->children_ = std::move(children);
  return e;
}

ExprPtr PshExpr::max(std::vector<Ptr> children) {
  if (children.empty()) throw std::invalid_argument("max: needs at least one child");
  auto e = std::shared_ptr<PshExpr>(new PshExpr());
  e->kind_ = Kind::Max;
  e->arity_ = children[0]->arity();
  for (const auto& c : children)
    if (c->arity() != e->arity_) throw std::invalid_argument("max: mixed arities");
  e->children_ = std::move(children);
  return e;
}

ExprPtr PshExpr::composed(Ptr inner, PolyMap map) {
  if (!inner) throw std::invalid_argument("compose: null inner");
  if (map.n_out() != inner->arity())
    throw std::invalid_argument("compose: map output arity does not match expression arity");
  auto e = std::shared_ptr<PshExpr>(new PshExpr());
  e->kind_ = Kind::Compose;
  e->arity_ = map.n_in;
  e->inner_ = std::move(inner);
  e->map_ = std::move(map);
  return e;
}

bool PshExpr::equals(const PshExpr& o) const {
  if (kind_ != o.kind_ || arity_ != o.arity_) return false;
  switch (kind_) {
    case Kind::LogSumPow: {
      if (terms_.size() != o.terms_.size()) return false;
      for (std::size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].alpha == o.terms_[i].alpha) || !(terms_[i].poly == o.terms_[i].poly))
          return false;
      return true;
    }
    case Kind::Scale:
      return scale_ == o.scale_ && children_[0]->equals(*o.children_[0]);
    case Kind::Sum:
    case Kind::Max: {
      if (children_.size() != o.children_.size()) return false;
      for (std::size_t i = 0; i < children_.size(); ++i)
        if (!children_[i]->equals(*o.children_[i])) return false;
      return true;
    }
    case Kind::Compose: {
      if (!(inner_->equals(*o.inner_)) || map_.n_in != o.map_.n_in ||
          map_.comps.size() != o.map_.comps.size())
        return false;
      for (std::size_t i = 0; i < map_.comps.size(); ++i)
        if (!(map_.comps[i] == o.map_.comps[i])) return false;
      return true;
    }
  }
  return false;
}

double evaluate(const PshExpr& e, std::span<const cdouble> z) {
  if (static_cast<int>(z.size()) != e.arity())
    throw std::invalid_argument("evaluate: arity mismatch");
  switch (e.kind()) {
    case PshExpr::Kind::LogSumPow: {
      // log sum |p_i|^{a_i} via stable log-sum-exp of a_i * log|p_i|
      double m = kNegInf;
      std::vector<double> ls;
      ls.reserve(e.terms().size());
      for (const auto& t : e.terms()) {
        cdouble v = t.poly.eval(z);
        double a2 = std::norm(v);
        double L = a2 == 0.0 ? kNegInf : 0.5 * t.alpha.to_double() * std::log(a2);
        ls.push_back(L);
        m = std::max(m, L);
      }
      if (m == kNegInf) return kNegInf;
      double s = 0.0;
      for (double L : ls) s += std::exp(L - m);
      return m + std::log(s);
    }
    case PshExpr::Kind::Scale:
      return e.scale_factor().to_double() * evaluate(*e.children()[0], z);
    case PshExpr::Kind::Sum: {
      double s = 0.0;
      for (const auto& c : e.children()) {
        double v = evaluate(*c, z);
        if (v == kNegInf) return kNegInf;
        s += v;
      }
      return s;
    }
    case PshExpr::Kind::Max: {
      double m = kNegInf;
      for (const auto& c : e.children()) m = std::max(m, evaluate(*c, z));
      return m;
    }
    case PshExpr::Kind::Compose: {
      std::vector<cdouble> w = e.map().eval(z);
      return evaluate(*e.inner(), w);
    }
  }
  return kNegInf;
}

double evaluate(const PshExpr& e, const ComplexPoint& z) { return evaluate(e, z.coords); }

ExprPtr compose(ExprPtr expr, PolyMap f) { return PshExpr::composed(std::move(expr), std::move(f)); }

namespace {
ExprPtr flatten_impl(const ExprPtr& e, const PolyMap* outer) {
  switch (e->kind()) {
    case PshExpr::Kind::LogSumPow: {
      if (!outer) return e;
      std::vector<PowTerm> terms;
      terms.reserve(e->terms().size());
      for (const auto& t : e->terms()) terms.push_back({t.poly.subst(outer->comps), t.alpha});
      return PshExpr::log_sum_pow(std::move(terms));
    }
    case PshExpr::Kind::Scale:
      return PshExpr::scale(e->scale_factor(), flatten_impl(e->children()[0], outer));
    case PshExpr::Kind::Sum: {
      std::vector<ExprPtr> ch;
      ch.reserve(e->children().size());
      for (const auto& c : e->children()) ch.push_back(flatten_impl(c, outer));
      return PshExpr::sum(std::move(ch), outer ? outer->n_in : e->arity());
    }
    case PshExpr::Kind::Max: {
      std::vector<ExprPtr> ch;
      ch.reserve(e->children().size());
      for (const auto& c : e->children()) ch.push_back(flatten_impl(c, outer));
      return PshExpr::max(std::move(ch));
    }
    case PshExpr::Kind::Compose: {
      if (!outer) return flatten_impl(e->inner(), &e->map());
      // compose maps: inner map applied after outer substitution
      PolyMap combined;
      combined.n_in = outer->n_in;
      for (const auto& c : e->map().comps) combined.comps.push_back(c.subst(outer->comps));
      return flatten_impl(e->inner(), &combined);
    }
  }
  return e;
}
}  // namespace

ExprPtr flatten(ExprPtr expr) { return flatten_impl(expr, nullptr); }

ExprPtr scaled(Rat c, ExprPtr e) {
  if (c == Rat(1)) return e;
  return PshExpr::scale(c, std::move(e));
}

namespace {
std::string rat_decimal(const Rat& r) {
  // exact decimal when the denominator is 2^a 5^b, else a round-trip double
  std::int64_t den = r.den();
  int twos = 0, fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den == 1) {
    int digits = std::max(twos, fives);
    __int128 num = r.num();
    for (int i = 0; i < digits; ++i) num *= 10;
    num /= r.den();
    bool neg = num < 0;
    if (neg) num = -num;
    std::string s;
    while (num > 0 || s.empty()) {
      s.push_back(static_cast<char>('0' + static_cast<int>(num % 10)));
      num /= 10;
    }
    while (static_cast<int>(s.size()) <= digits) s.push_back('0');
    std::reverse(s.begin(), s.end());
    if (digits > 0) s.insert(s.size() - digits, ".");
    return (neg ? "-" : "") + s;
  }
  std::ostringstream os;
  os.precision(17);
  os << r.to_double();
  return os.str();
}

void print_impl(const PshExpr& e, std::ostringstream& os) {
  switch (e.kind()) {
    case PshExpr::Kind::LogSumPow: {
      os << "log(";
      bool first = true;
      for (const auto& t : e.terms()) {
        if (!first) os << "+";
        first = false;
        os << "|" << t.poly.str() << "|^" << rat_decimal(t.alpha);
      }
      os << ")";
      return;
    }
    case PshExpr::Kind::Scale: {
      os << rat_decimal(e.scale_factor()) << "*(";
      print_impl(*e.children()[0], os);
      os << ")";
      return;
    }
    case PshExpr::Kind::Sum: {
      if (e.children().empty()) {
        os << "log(|(1+0i)|^1)";  // the zero function
        return;
      }
      bool first = true;
      for (const auto& c : e.children()) {
        if (!first) os << "+";
        first = false;
        const bool wrap = c->kind() == PshExpr::Kind::Sum && !c->children().empty();
        if (wrap) os << "(";
        print_impl(*c, os);
        if (wrap) os << ")";
      }
      return;
    }
    case PshExpr::Kind::Max: {
      os << "max(";
      bool first = true;
      for (const auto& c : e.children()) {
        if (!first) os << ",";
        first = false;
        print_impl(*c, os);
      }
      os << ")";
      return;
    }
    case PshExpr::Kind::Compose:
      throw std::logic_error("print: flatten composes first");
  }
}
}  // namespace

std::string print(const PshExpr& e) {
  ExprPtr flat = flatten(std::make_shared<const PshExpr>(e));
  std::ostringstream os;
  print_impl(*flat, os);
  return os.str();
}

}  // namespace lelong
