// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Stratified annulus engine. Every dyadic annulus around the center gets a
// uniform level-0 sample and, when the potential has a heavy upper tail, an
// adaptive multilevel-splitting run that chases the tail: each level keeps
// the top fraction q of the potential and re-equilibrates with
// Metropolis moves, producing conditional bands with known log-probability.
// Band-corrected masses make anisotropic singular regions (which uniform
// sampling essentially never hits) measurable, and the level spacing gives
// the tail decay rate of the potential, which decides per-annulus
// integrability. Everything is deterministic for a fixed seed: every
// stratum draws from a substream keyed by (seed, annulus, level, batch).
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lelong/eval_plan.hpp"
#include "lelong/sampling.hpp"

namespace lelong::mc {

struct EngineConfig {
  int k_min = 4;
  int k_max = 18;
  std::size_t n0 = 16384;   // level-0 samples per annulus
  int batches = 16;         // median-of-means batches
  std::size_t chains = 512; // splitting chains per level
  int steps = 12;           // Metropolis steps per level
  double q = 0.25;          // survival fraction per level
  int max_levels = 96;
  std::size_t band_cap = 2048;  // stored samples per band
  double radius_base = 1.0;     // annulus k spans radius_base * [2^-k-1, 2^-k]
  bool store_points = false;    // keep sample coordinates (quadrature use)
  std::uint64_t seed = 0;
};

// Integrand exp(-2 inv_s A(x) - 2 B(x)) over points x near 0; expressions
// are pre-shifted so the singular center sits at the origin.
struct PotentialSpec {
  int n = 1;
  EvalPlan phi;                   // A(x); default-constructed empty means A = 0
  bool phi_set = false;
  double radial_t = 0.0;          // contributes t log|x| to B
  EvalPlan psi;                   // expr-weight contribution to B
  bool psi_set = false;
  std::vector<double> coord_log;  // c_i log|x_i| contributions to B (size n or empty)

  enum class SplitOn { PhiOnly, Total } split = SplitOn::PhiOnly;
  double fixed_inv_s = 1.0;  // potential multiplier in Total mode
};

struct Band {
  double logP = 0.0;  // log P(U > u_lo)
  double u_lo = 0.0;
  std::vector<double> A, B, U;
  std::vector<std::vector<double>> re, im;  // optional coordinates
};

struct AnnulusRun {
  int k = 0;
  double log_vol = 0.0;
  std::vector<double> A0, B0, U0;  // level-0 values
  Block pts0;                      // level-0 coordinates when stored
  std::vector<Band> bands;
  std::optional<double> cap;   // detected essential sup of U
  std::optional<double> beta;  // tail rate of P(U > u) ~ exp(-beta u)
  double beta_se = 0.0;
  int levels = 0;
  long clipped = 0;
  double last_acceptance = 1.0;
};

class AnnulusEngine {
 public:
  AnnulusEngine(PotentialSpec spec, EngineConfig cfg);

  void run();  // builds every annulus (parallel over annuli)

  const EngineConfig& config() const { return cfg_; }
  const PotentialSpec& spec() const { return spec_; }
  const std::vector<AnnulusRun>& annuli() const { return runs_; }

  struct LogMass {
    double value = 0.0;      // log of the annulus mass (band-corrected)
    bool divergent = false;  // unbounded tail too slow for this multiplier
    double band_fraction = 0.0;
    double se_rel = 0.0;  // relative stderr proxy from level-0 batches
  };
  LogMass log_mass(std::size_t idx, double inv_s) const;

  struct MomMass {
    double value = 0.0;  // vol * median-of-means of level-0 + band corrections
    double se = 0.0;
    long clipped = 0;
    double band_fraction = 0.0;
    bool divergent = false;
  };
  MomMass mom_mass(std::size_t idx, double inv_s) const;

  struct TailRate {
    double beta = 0.0;
    double se = 0.0;
    int annuli_used = 0;
  };
  std::optional<TailRate> tail_rate() const;

  struct Slope {
    double e = 0.0;  // fitted decay exponent of -log2 mass_k vs k
    double se = 0.0;
    int used = 0;
    bool any_divergent = false;  // some deep annulus has an integrability-breaking tail
  };
  Slope slope(double inv_s) const;

 private:
  void run_annulus(std::size_t idx);
  void eval_AB(const Block& blk, std::vector<double>& A, std::vector<double>& B,
               long& clipped) const;
  double potential_U(double A, double B) const;

  PotentialSpec spec_;
  EngineConfig cfg_;
  std::vector<AnnulusRun> runs_;
};

}  // namespace lelong::mc
