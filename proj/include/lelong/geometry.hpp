// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Haar-random unitaries and k-planes, restriction of expressions to
// subspaces, and the polar-Grassmannian integration formula
//
//   int_{C^n} g dlam_n = (c_n / c_k) int_{G(k,n)} int_T |z|^{2(n-k)} g dlam_k dmu(T),
//
// with c_m = 2 pi^m / (m-1)! the surface area of S^{2m-1}.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "lelong/expr.hpp"
#include "lelong/montecarlo.hpp"

namespace lelong::geom {

struct UnitaryMatrix {
  int n = 1;
  std::vector<cdouble> entries;  // column-major n x n
  cdouble at(int r, int c) const { return entries[static_cast<std::size_t>(c) * n + r]; }
  double unitarity_residual() const;  // max |U*U - I| entry
};

struct Subspace {
  int k = 1, n = 1;
  std::vector<cdouble> frame;  // column-major n x k, orthonormal columns
  cdouble at(int r, int c) const { return frame[static_cast<std::size_t>(c) * n + r]; }
  double orthonormality_residual() const;
  std::vector<cdouble> embed(std::span<const cdouble> w) const;  // frame * w
};

// complex Ginibre + QR with the phase fix that makes the distribution Haar
UnitaryMatrix haar_unitary(int n, std::uint64_t seed);

// first k columns of a Haar unitary
Subspace random_subspace(int k, int n, std::uint64_t seed);

// expr restricted to the subspace: Compose node with the linear embedding
ExprPtr restrict_expr(const ExprPtr& expr, const Subspace& T);

// surface area of S^{2k-1}
double sphere_surface(int k);

enum class TestFunction { Gaussian, MollifiedBall };

struct GrassmannCheck {
  double lhs = 0.0;        // int g dlam_n
  double rhs = 0.0;        // (c_n/c_k) * mean over planes of the inner integral
  double rel_error = 0.0;
  double plane_variance = 0.0;  // across-plane variance of the inner integral
  int planes = 0;
  std::size_t samples_per_plane = 0;
};

GrassmannCheck polar_grassmann_check(TestFunction g, int k, int n, int n_planes,
                                     std::size_t n_samples, std::uint64_t seed);

struct LineRestrictionEstimate {
  double median = 0.0;
  double mad = 0.0;            // median absolute deviation across lines
  bool multimodal = false;     // large spread flags a non-generic center
  std::vector<double> per_line;
  std::vector<double> ci_lo, ci_hi;
};

// 1-D integrability index of phi restricted to Haar lines through a; in one
// variable that index is the Lelong number, so the median estimates
// nu_{a,n-1}(phi)
LineRestrictionEstimate lelong_via_lines(const ExprPtr& expr, const ComplexPoint& a, int n_lines,
                                         std::uint64_t seed, const mc::McConfig& cfg = {});

}  // namespace lelong::geom
