// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Data-parallel inner-loop kernels. All Monte Carlo hot paths (expression
// evaluation over sample blocks, exp/log of weight exponents, sample
// transforms, reductions) go through this table. Two backends exist: a
// scalar reference and an AVX2 variant, selected at runtime. Both execute
// the same IEEE operation sequence lane by lane, so their outputs are
// bit-identical; tests assert that equivalence.
//
// Contract for every array kernel: n must be a multiple of 4 (callers pad
// blocks) and output arrays may not alias inputs unless stated.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace lelong::kern {

// Flattened sparse polynomial with complex coefficients. Each monomial is a
// coefficient plus a run of variable indices, one per power, so z1^2*z2
// becomes coeff * z[0]*z[0]*z[1].
struct PolyProg {
  int nvars = 0;
  std::vector<double> coeff_re, coeff_im;  // one per monomial
  std::vector<int> offset;                 // size nmono+1, into factor_var
  std::vector<int> factor_var;
};

struct KernelTable {
  const char* name;

  // y = exp(clamp(x, -708, 708))
  void (*vexp)(const double* x, double* y, std::size_t n);
  // y = log(x); x >= 0, log(0) = -inf
  void (*vlog)(const double* x, double* y, std::size_t n);
  // s = sin(x), c = cos(x); |x| <= 16
  void (*vsincos)(const double* x, double* s, double* c, std::size_t n);
  // z = Phi^{-1}(u), u in (0,1)
  void (*vnorm_icdf)(const double* u, double* z, std::size_t n);
  // out = halfalpha * log(re^2 + im^2)
  void (*vlogabs2)(const double* re, const double* im, double halfalpha, double* out,
                   std::size_t n);
  // y += x
  void (*vadd)(double* y, const double* x, std::size_t n);
  // y = max(y, x)
  void (*vmax)(double* y, const double* x, std::size_t n);
  // y = y * c + d
  void (*vscale_shift)(double* y, double c, double d, std::size_t n);
  // acc = log(exp(acc) + exp(x)), elementwise, -inf-safe
  void (*vlse2)(double* acc, const double* x, std::size_t n);
  // out_re/out_im = poly(z) over the block; re[v]/im[v] are coordinate arrays
  void (*poly_eval)(const PolyProg& prog, const double* const* re, const double* const* im,
                    double* out_re, double* out_im, std::size_t n);
  // fixed lane-pairwise order: (l0+l1)+(l2+l3) over 4 lane accumulators
  double (*reduce_sum)(const double* x, std::size_t n);
  double (*reduce_max)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when the CPU lacks AVX2+FMA

// Active table: "auto" picks AVX2 when available. LELONG_KERNEL=scalar|avx2|auto
// overrides; set_active() has priority over the environment.
const KernelTable& active();
void set_active(const std::string& name);

inline std::size_t padded(std::size_t n) { return (n + 3) & ~std::size_t(3); }

}  // namespace lelong::kern
