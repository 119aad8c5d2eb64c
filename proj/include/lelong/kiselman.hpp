// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Directed Lelong numbers: shell-sup slopes over anisotropic torus shells
// {|z_i - w_i| = r^{a_i}}, the rational rescaling identity
// nu_w(phi, p/q) = q^{-1} nu_w(phi(z^{p_1},...,z^{p_n})), and the
// weighted-integral characterization for generic rotations.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lelong/expr.hpp"
#include "lelong/geometry.hpp"

namespace lelong::kis {

struct DirectionSpec {
  std::vector<double> a_dirs;  // nonnegative, at least one positive
  std::optional<std::pair<std::vector<int>, int>> rational_form;  // a_i = p_i / q

  static DirectionSpec from_values(std::vector<double> dirs);
  static DirectionSpec rational(std::vector<int> p, int q);
  int dim() const { return static_cast<int>(a_dirs.size()); }
};

struct DirectionalEstimate {
  double nu = 0.0;  // fitted slope of shell sup against log r
  double se = 0.0;
  std::vector<double> radii, shell_sup, quotient;
  std::vector<int> skipped;  // shells where every sample was -inf
};

// radii must be decreasing with at least 6 entries; the slope is fitted on
// the smallest six shells (the quotient is monotone, so the deepest shells
// carry the limit)
DirectionalEstimate directional_nu(const ExprPtr& expr, const ComplexPoint& w,
                                   const DirectionSpec& dirs, const std::vector<double>& radii,
                                   std::size_t samples_per_shell, std::uint64_t seed);

// convenience schedule r_j = 2^{-j}, j = 4..14, 4096 samples per shell
DirectionalEstimate directional_nu(const ExprPtr& expr, const ComplexPoint& w,
                                   const DirectionSpec& dirs, std::uint64_t seed);

struct RescaleReport {
  DirectionalEstimate direct;    // nu_w(phi, p/q)
  DirectionalEstimate rescaled;  // q^{-1} nu_w(phi(z^p), 1)
  double tolerance = 0.0;
  bool ok = false;
};

RescaleReport rescale_identity_check(const ExprPtr& expr, const std::vector<int>& p, int q,
                                     std::uint64_t seed);

struct DirectionalIntegralReport {
  double nu = 0.0;
  bool nu_lt_1 = false;
  bool integral_converges = false;
  bool agree = false;     // nu < 1  iff  the weighted integral converges
  bool boundary = false;  // nu within tolerance of 1: equivalence uninformative
  double slope_e = 0.0, slope_se = 0.0;
  std::optional<double> tail_beta;
};

// dirs must carry a rational form; rotation = nullptr checks the unrotated
// expression (the non-generic configuration the equivalence can fail on)
DirectionalIntegralReport directional_integral_check(const ExprPtr& expr,
                                                     const DirectionSpec& dirs,
                                                     const geom::UnitaryMatrix* rotation,
                                                     std::uint64_t seed);

}  // namespace lelong::kis
