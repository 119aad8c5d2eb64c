// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Sparse multivariate polynomials over complex double coefficients with
// exact integer exponents. Exponent arithmetic (powers, substitution) stays
// exact; only coefficients live in floating point.
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lelong {

using cdouble = std::complex<double>;

struct Monomial {
  std::vector<int> exps;  // size nvars
  cdouble coeff;
};

class Poly {
 public:
  Poly() : nvars_(0) {}
  explicit Poly(int nvars) : nvars_(nvars) {}
  static Poly constant(int nvars, cdouble c);
  static Poly variable(int nvars, int index);

  int nvars() const { return nvars_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;

  // single monomial c * z^e with a nonzero coefficient?
  bool single_monomial(std::vector<int>& exps, cdouble& coeff) const;

  cdouble eval(std::span<const cdouble> z) const;

  Poly& add_term(std::vector<int> exps, cdouble coeff);

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly pow(int e) const;

  // substitute variable i by comps[i]; comps are polynomials in m variables
  Poly subst(const std::vector<Poly>& comps) const;

  // widen to a larger variable count (indices unchanged)
  Poly widened(int new_nvars) const;

  bool operator==(const Poly& o) const;

  std::string str() const;  // grammar-compatible rendering

 private:
  void normalize();
  int nvars_;
  std::vector<Monomial> terms_;  // sorted by exponent vector, unique, nonzero
};

// Holomorphic polynomial map C^{n_in} -> C^{n_out}.
struct PolyMap {
  std::vector<Poly> comps;  // each in n_in variables
  int n_in = 0;

  int n_out() const { return static_cast<int>(comps.size()); }
  std::vector<cdouble> eval(std::span<const cdouble> z) const;

  static PolyMap identity(int n);
  // z_i -> z_i^{p_i}
  static PolyMap coordinate_powers(const std::vector<int>& p);
  // affine map w -> a + M w given column-major complex matrix entries
  static PolyMap linear(int n_in, int n_out, const std::vector<cdouble>& colmajor,
                        const std::vector<cdouble>& shift = {});
};

}  // namespace lelong
