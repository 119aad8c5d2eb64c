// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
#include "lelong/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace lelong {

namespace {
constexpr std::size_t kMaxTerms = 200000;

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  std::string s = os.str();
  // shortest round-trip form
  for (int prec = 1; prec < 17; ++prec) {
    std::ostringstream t;
    t.precision(prec);
    t << x;
    if (std::stod(t.str()) == x) return t.str();
  }
  return s;
}
}  // namespace

Poly Poly::constant(int nvars, cdouble c) {
  Poly p(nvars);
  if (c != cdouble(0.0)) p.terms_.push_back({std::vector<int>(nvars, 0), c});
  return p;
}

Poly Poly::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw std::invalid_argument("Poly::variable: index out of range");
  Poly p(nvars);
  std::vector<int> e(nvars, 0);
  e[index] = 1;
  p.terms_.push_back({std::move(e), cdouble(1.0)});
  return p;
}

int Poly::total_degree() const {
  int d = 0;
  for (const auto& m : terms_) {
    int s = 0;
    for (int e : m.exps) s += e;
    d = std::max(d, s);
  }
  return d;
}

bool Poly::single_monomial(std::vector<int>& exps, cdouble& coeff) const {
  if (terms_.size() != 1) return false;
  exps = terms_[0].exps;
  coeff = terms_[0].coeff;
  return true;
}

cdouble Poly::eval(std::span<const cdouble> z) const {
  if (static_cast<int>(z.size()) != nvars_) throw std::invalid_argument("Poly::eval: arity mismatch");
  cdouble acc(0.0);
  for (const auto& m : terms_) {
    cdouble t = m.coeff;
    for (int v = 0; v < nvars_; ++v)
      for (int e = 0; e < m.exps[v]; ++e) t *= z[v];
    acc += t;
  }
  return acc;
}

Poly& Poly::add_term(std::vector<int> exps, cdouble coeff) {
  if (static_cast<int>(exps.size()) != nvars_) throw std::invalid_argument("Poly::add_term: arity");
  for (int e : exps)
    if (e < 0) throw std::invalid_argument("Poly::add_term: negative exponent");
  terms_.push_back({std::move(exps), coeff});
  normalize();
  return *this;
}

void Poly::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Monomial& a, const Monomial& b) { return a.exps < b.exps; });
  std::vector<Monomial> out;
  out.reserve(terms_.size());
  for (auto& m : terms_) {
    if (!out.empty() && out.back().exps == m.exps)
      out.back().coeff += m.coeff;
    else
      out.push_back(std::move(m));
  }
  std::erase_if(out, [](const Monomial& m) { return m.coeff == cdouble(0.0); });
  terms_ = std::move(out);
  if (terms_.size() > kMaxTerms) throw std::runtime_error("Poly: term count limit exceeded");
}

Poly operator+(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("Poly+: arity mismatch");
  Poly r(a.nvars_);
  r.terms_ = a.terms_;
  r.terms_.insert(r.terms_.end(), b.terms_.begin(), b.terms_.end());
  r.normalize();
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly nb = b;
  for (auto& m : nb.terms_) m.coeff = -m.coeff;
  return a + nb;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("Poly*: arity mismatch");
  Poly r(a.nvars_);
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ma : a.terms_)
    for (const auto& mb : b.terms_) {
      std::vector<int> e(a.nvars_);
      for (int v = 0; v < a.nvars_; ++v) e[v] = ma.exps[v] + mb.exps[v];
      r.terms_.push_back({std::move(e), ma.coeff * mb.coeff});
    }
  r.normalize();
  return r;
}

Poly Poly::pow(int e) const {
  if (e < 0) throw std::invalid_argument("Poly::pow: negative exponent");
  Poly r = Poly::constant(nvars_, 1.0);
  Poly base = *this;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = (e >>= 1) ? base * base : base;
  }
  return r;
}

Poly Poly::subst(const std::vector<Poly>& comps) const {
  if (static_cast<int>(comps.size()) != nvars_) throw std::invalid_argument("Poly::subst: arity");
  const int m = comps.empty() ? 0 : comps[0].nvars();
  for (const auto& c : comps)
    if (c.nvars() != m) throw std::invalid_argument("Poly::subst: component arity mismatch");
  Poly acc(m);
  for (const auto& mono : terms_) {
    Poly t = Poly::constant(m, mono.coeff);
    for (int v = 0; v < nvars_; ++v)
      if (mono.exps[v] > 0) t = t * comps[v].pow(mono.exps[v]);
    acc = acc + t;
  }
  return acc;
}

Poly Poly::widened(int new_nvars) const {
  if (new_nvars < nvars_) throw std::invalid_argument("Poly::widened: shrinking");
  Poly r(new_nvars);
  for (const auto& m : terms_) {
    std::vector<int> e(new_nvars, 0);
    std::copy(m.exps.begin(), m.exps.end(), e.begin());
    r.terms_.push_back({std::move(e), m.coeff});
  }
  return r;
}

bool Poly::operator==(const Poly& o) const {
  if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].exps != o.terms_[i].exps || terms_[i].coeff != o.terms_[i].coeff) return false;
  return true;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& m : terms_) {
    if (!first) os << "+";
    first = false;
    bool has_var = false;
    for (int e : m.exps) has_var = has_var || e > 0;
    const bool unit = m.coeff == cdouble(1.0);
    if (!unit || !has_var) {
      if (m.coeff.imag() == 0.0)
        os << "(" << format_double(m.coeff.real()) << "+0i)";
      else
        os << "(" << format_double(m.coeff.real()) << (m.coeff.imag() < 0 ? "-" : "+")
           << format_double(std::abs(m.coeff.imag())) << "i)";
      if (has_var) os << "*";
    }
    bool firstv = true;
    for (int v = 0; v < nvars_; ++v) {
      if (m.exps[v] == 0) continue;
      if (!firstv) os << "*";
      firstv = false;
      os << "z" << (v + 1);
      if (m.exps[v] > 1) os << "^" << m.exps[v];
    }
  }
  return os.str();
}

std::vector<cdouble> PolyMap::eval(std::span<const cdouble> z) const {
  std::vector<cdouble> out;
  out.reserve(comps.size());
  for (const auto& c : comps) out.push_back(c.eval(z));
  return out;
}

PolyMap PolyMap::identity(int n) {
  PolyMap f;
  f.n_in = n;
  for (int i = 0; i < n; ++i) f.comps.push_back(Poly::variable(n, i));
  return f;
}

PolyMap PolyMap::coordinate_powers(const std::vector<int>& p) {
  PolyMap f;
  f.n_in = static_cast<int>(p.size());
  for (int i = 0; i < f.n_in; ++i) {
    if (p[i] < 1) throw std::invalid_argument("coordinate_powers: power must be >= 1");
    f.comps.push_back(Poly::variable(f.n_in, i).pow(p[i]));
  }
  return f;
}

PolyMap PolyMap::linear(int n_in, int n_out, const std::vector<cdouble>& colmajor,
                        const std::vector<cdouble>& shift) {
  if (static_cast<int>(colmajor.size()) != n_in * n_out)
    throw std::invalid_argument("PolyMap::linear: matrix size");
  PolyMap f;
  f.n_in = n_in;
  for (int r = 0; r < n_out; ++r) {
    Poly p(n_in);
    for (int c = 0; c < n_in; ++c) {
      cdouble a = colmajor[static_cast<std::size_t>(c) * n_out + r];
      if (a != cdouble(0.0)) {
        std::vector<int> e(n_in, 0);
        e[c] = 1;
        p.add_term(std::move(e), a);
      }
    }
    if (!shift.empty() && shift[r] != cdouble(0.0)) p.add_term(std::vector<int>(n_in, 0), shift[r]);
    f.comps.push_back(std::move(p));
  }
  return f;
}

}  // namespace lelong
