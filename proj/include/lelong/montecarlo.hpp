// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// The numerical oracle: decide convergence of
//     I(s) = int_B exp(-2 phi(z)/s - 2 psi(z - a)) dlambda(z)
// from dyadic-annulus masses and locate the threshold nu_{a,psi}(phi) by
// bisection in s. Two divergence mechanisms are watched: the fitted decay
// exponent of the annulus masses (radial route) and the per-annulus tail
// rate of the potential (cross-sectional route, for singular sets crossing
// the annuli). The reported threshold is the larger of the two roots; ties
// classify as divergent, matching the infimum in the definition.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lelong/expr.hpp"
#include "lelong/weights.hpp"

namespace lelong::mc {

struct McConfig {
  int k_min = 4;
  int k_max = 18;
  std::size_t samples = 16384;  // level-0 samples per annulus
  double s_lo = 0.05;           // default bracket
  double s_hi = 8.0;
  double tol = 0.02;            // bisection tolerance
};

struct AnnulusProfile {
  int k_min = 0, k_max = 0;
  double s = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> masses;         // band-corrected, vol * mean estimate
  std::vector<double> stderrs;        // level-0 median-of-means stderr
  std::vector<long> clipped;          // clipped exponent evaluations
  std::vector<double> band_fraction;  // share of mass carried by splitting bands
  std::vector<int> divergent;         // per-annulus integrability flag at this s
  std::optional<double> tail_beta;    // combined potential tail rate
  double tail_beta_se = 0.0;
};

AnnulusProfile integral_profile(const ExprPtr& expr, const WeightSpec& w, double s, int k_min,
                                int k_max, std::size_t n_samples, std::uint64_t seed);

struct DivergenceExponent {
  double e = 0.0;
  double se = 0.0;
  bool flagged = false;
  std::string flag;
};

// weighted least-squares slope of -log2 m_k against k; e > 0 means the
// masses are geometrically summable
DivergenceExponent divergence_exponent(const AnnulusProfile& profile);

struct ThresholdEstimate {
  double nu_hat = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;  // 95% interval
  std::vector<std::array<double, 3>> exponent_curve;  // (s, e, se) along the trace
  std::vector<double> bisection_trace;
  double radial_root = 0.0;
  double radial_se = 0.0;
  std::optional<double> tail_nu;  // cross-sectional threshold 2/beta
  double tail_se = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

// a is the point nu_{a,psi}(phi) refers to; expressions are recentered
// exactly before sampling
ThresholdEstimate estimate_threshold(const ExprPtr& expr, const WeightSpec& w,
                                     const ComplexPoint& a, std::pair<double, double> bracket,
                                     double tol, std::uint64_t seed, const McConfig& cfg = {});

ThresholdEstimate estimate_threshold(const ExprPtr& expr, const WeightSpec& w,
                                     const ComplexPoint& a, std::uint64_t seed,
                                     const McConfig& cfg = {});

struct PropertySuiteReport {
  ThresholdEstimate nu1, nu2, nu_sum, nu_max;
  double slack = 0.0;
  bool subadditive_ok = false;  // nu(phi + phi') <= nu(phi) + nu(phi') + slack
  bool max_ok = false;          // nu(max) >= min(nu, nu') - slack
};

PropertySuiteReport hoelder_property_suite(const ExprPtr& e1, const ExprPtr& e2,
                                           const WeightSpec& w, std::uint64_t seed,
                                           const McConfig& cfg = {});

struct BiholoReport {
  ThresholdEstimate base, composed;
  double jacobian_abs = 0.0;
  bool ok = false;  // |difference| <= combined ci width
};

// f must fix 0 with det f'(0) != 0; throws on a singular Jacobian
BiholoReport biholo_invariance_check(const ExprPtr& expr, const PolyMap& f, double t,
                                     std::uint64_t seed, const McConfig& cfg = {});

struct LevelsetPoint {
  ComplexPoint z;
  double nu_hat = 0.0;
  bool above = false;
};

// per-point threshold estimates with the flag nu_hat >= c; weight recentered
// at each grid point
std::vector<LevelsetPoint> levelset_scan(const ExprPtr& expr, const WeightSpec& w,
                                         const std::vector<ComplexPoint>& grid, double c,
                                         std::uint64_t seed, const McConfig& cfg = {});

}  // namespace lelong::mc
