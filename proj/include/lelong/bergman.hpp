// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Finite-dimensional weighted Bergman models: Gram matrices of the monomial
// basis of degree <= D under the weight e^{-2 m phi - 2 psi(. - a)} on
// B(0, r), Cholesky-backed evaluation of the Bergman function
//   B(z) = sup{ |h(z)|^2 : h in span, ||h||_weight <= 1 } = v(z)* G^{-1} v(z),
// and the numerical probes built on it. Basis elements whose diagonal
// weighted norm diverges are dropped, which is exactly the finite-D image of
// the weighted L^2 membership constraint.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "lelong/expr.hpp"
#include "lelong/weights.hpp"

namespace lelong::bergman {

struct QuadratureSpec {
  std::size_t samples = 2048;  // level-0 samples per shell
  int shells = 24;             // dyadic shells of B(0, r)
  std::uint64_t seed = 0;
};

struct BergmanModel {
  ComplexPoint center;  // a
  int m = 1;
  int degree = 0;
  double radius = 1.0;
  int n = 1;
  std::vector<std::vector<int>> basis;    // kept multi-indices
  std::vector<std::vector<int>> dropped;  // rejected by the divergence test
  Eigen::MatrixXcd gram;
  Eigen::LLT<Eigen::MatrixXcd> factor;
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
  QuadratureSpec quadrature;
  bool exact_quadrature = false;  // n = 1 smooth fast path

  Eigen::VectorXcd basis_at(std::span<const cdouble> z) const;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// throws NumericalError when the Gram stays indefinite/singular after the
// basis filter (eigenvalue floor 1e-12 * trace)
BergmanModel build_model(const ExprPtr& expr, const WeightSpec& w, const ComplexPoint& a, int m,
                         int degree, double radius, const QuadratureSpec& quad);

// v(z)* G^{-1} v(z); requires |z| <= r
double bergman_value(const BergmanModel& model, const ComplexPoint& z);

// (1/2m) log B(z); throws std::domain_error when B(z) = 0
double psi_m(const BergmanModel& model, const ComplexPoint& z);

struct SandwichReport {
  std::vector<int> m_list;
  double c_lower = 0.0;  // fitted c1:  phi(z) - c1/m <= Psi_z^m(z)
  double c_upper = 0.0;  // fitted c2:  Psi_z^m(z) <= sup_ball phi + (l-n) log r'/m + c2/m
  int violations = 0;    // against the fitted constants
  std::vector<double> width_by_m;  // max_z |Psi_z^m(z) - phi(z)|
  bool width_decreasing = false;
  int points = 0;
};

// psi = t log|z - center| with t = l and delta = n - l per the radial
// sandwich hypothesis l log|z| >= psi >= (n - delta) log|z|
SandwichReport sandwich_check(const ExprPtr& expr, const std::vector<int>& m_list, int degree,
                              double radius, double l, double delta, std::uint64_t seed);

struct AttenuationPoint {
  ComplexPoint z;
  double slope = 0.0;  // shell-sup slope of log B_.(.) at z
  double se = 0.0;
  bool positive = false;  // attenuated Lelong number classified positive
};

// classical Lelong number of z -> log B_z(z) at each grid point via
// shell-sup slopes; reports the sign classification only
std::vector<AttenuationPoint> attenuation_probe(const ExprPtr& expr, const WeightSpec& w,
                                                const std::vector<ComplexPoint>& grid, int degree,
                                                double radius, std::uint64_t seed);

}  // namespace lelong::bergman
