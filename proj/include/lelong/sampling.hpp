// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Samplers for the Monte Carlo strata. Points are produced in SoA blocks
// padded to a multiple of four so they feed the kernels directly. All
// transforms route through the kernel table, which keeps sample streams
// bit-identical across backends and worker counts.
#pragma once

#include <cstddef>
#include <vector>

#include "lelong/kernels.hpp"
#include "lelong/rng.hpp"

namespace lelong::mc {

struct Block {
  int n = 1;
  std::size_t count = 0;
  std::vector<std::vector<double>> re, im;  // [n][padded]
  std::vector<double> radius;               // |x|

  std::size_t padded_count() const { return kern::padded(count); }
  void resize(int dim, std::size_t cnt);
  std::vector<const double*> re_ptrs() const;
  std::vector<const double*> im_ptrs() const;
};

// uniform w.r.t. Lebesgue measure on {r_lo <= |x| <= r_hi} in C^n
void sample_annulus(Rng& rng, int n, double r_lo, double r_hi, std::size_t count, Block& out);

// uniform on the sphere |x| = r
void sample_sphere(Rng& rng, int n, double r, std::size_t count, Block& out);

// low-discrepancy points on the torus {|x_i| = rho_i}: Kronecker lattice
// phases with a seeded offset
void sample_torus(std::uint64_t seed, const std::vector<double>& rho, std::size_t count,
                  Block& out);

// volume of {r_lo <= |x| <= r_hi} in C^n (Lebesgue on R^{2n})
double annulus_volume(int n, double r_lo, double r_hi);
double log_annulus_volume(int n, double r_lo, double r_hi);

}  // namespace lelong::mc
