// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Weight specifications psi and the numerical audit of the admissibility
// conditions: integrability margin, isolated-singularity lower bound,
// Hoelder continuity of e^{2 psi}, and the Lelong number at the center.
// The audit is advisory: estimation proceeds regardless, carrying a flag.
#pragma once

#include <cstdint>
#include <optional>

#include "lelong/expr.hpp"

namespace lelong {

struct AdmissibilityParams {
  double tau = 0.5;   // integrability margin: e^{-2(1+tau) psi} locally L^1
  double l = 1.0;     // Lelong number of psi at 0
  double M = 1.0;     // isolated singularity: psi >= M log|z| near 0
  double alpha = 1.0; // Hoelder exponent of e^{2 psi}, in (0, 1]
};

struct WeightSpec {
  enum class Kind { Radial, Expr };
  Kind kind = Kind::Radial;
  double t = 0.0;   // Radial: psi(x) = t log|x|
  ExprPtr expr;     // Expr: psi(x), evaluated at x = z - center
  ComplexPoint center;
  AdmissibilityParams params;

  int dim() const { return kind == Kind::Radial ? center.dim() : expr->arity(); }
  static WeightSpec zero(int n);
};

// t log|z - a| with 0 <= t < dim(a); throws outside that range, where
// e^{-2(1+tau) psi} stops being locally integrable for every tau > 0
WeightSpec make_radial(double t, const ComplexPoint& a);

WeightSpec make_expr_weight(ExprPtr psi, const ComplexPoint& a,
                            const AdmissibilityParams& params);

struct AdmissibilityReport {
  bool radial_shortcut = false;

  bool integrability_margin_ok = false;
  double decay_exponent = 0.0;  // fitted dyadic decay of the e^{-2(1+tau)psi} masses
  double decay_exponent_se = 0.0;
  double decay_predicted = 0.0;  // 2n - 2t(1+tau) for radial weights

  bool lower_bound_ok = false;
  double worst_ratio = 0.0;  // max psi(x)/log|x| observed (must stay <= M)

  bool hoelder_ok = false;
  double hoelder_quotient_shallow = 0.0;
  double hoelder_quotient_deep = 0.0;
  double hoelder_trend = 0.0;  // log-quotient growth per shell; > 0 means blowup

  double lelong_estimate = 0.0;  // slope of shell sup of psi against log r
  double lelong_se = 0.0;

  std::uint64_t seed = 0;
  int samples = 0;

  bool all_ok() const {
    return integrability_margin_ok && lower_bound_ok && hoelder_ok;
  }
};

// shells r_j = 2^{-j}, j = 4..20; deterministic for fixed (w, seed, samples)
AdmissibilityReport audit_admissibility(const WeightSpec& w, std::uint64_t seed, int samples);

}  // namespace lelong
