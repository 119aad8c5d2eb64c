// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// AVX2+FMA backend. Operation-for-operation mirror of vec_scalar.hpp.
#pragma once

#include <immintrin.h>

namespace lelong::kern {

struct VecAvx2 {
  static constexpr int W = 4;
  __m256d v;

  VecAvx2() = default;
  VecAvx2(__m256d x) : v(x) {}

  static VecAvx2 load(const double* p) { return _mm256_loadu_pd(p); }
  void store(double* p) const { _mm256_storeu_pd(p, v); }
  static VecAvx2 bc(double x) { return _mm256_set1_pd(x); }

  friend VecAvx2 operator+(VecAvx2 a, VecAvx2 b) { return _mm256_add_pd(a.v, b.v); }
  friend VecAvx2 operator-(VecAvx2 a, VecAvx2 b) { return _mm256_sub_pd(a.v, b.v); }
  friend VecAvx2 operator*(VecAvx2 a, VecAvx2 b) { return _mm256_mul_pd(a.v, b.v); }
  friend VecAvx2 operator/(VecAvx2 a, VecAvx2 b) { return _mm256_div_pd(a.v, b.v); }
  static VecAvx2 fma(VecAvx2 a, VecAvx2 b, VecAvx2 c) { return _mm256_fmadd_pd(a.v, b.v, c.v); }
  static VecAvx2 max(VecAvx2 a, VecAvx2 b) { return _mm256_max_pd(b.v, a.v); }
  static VecAvx2 min(VecAvx2 a, VecAvx2 b) { return _mm256_min_pd(b.v, a.v); }
  static VecAvx2 floor(VecAvx2 a) { return _mm256_floor_pd(a.v); }
  static VecAvx2 sqrt(VecAvx2 a) { return _mm256_sqrt_pd(a.v); }

  static VecAvx2 cmp_lt(VecAvx2 a, VecAvx2 b) { return _mm256_cmp_pd(a.v, b.v, _CMP_LT_OQ); }
  static VecAvx2 cmp_le(VecAvx2 a, VecAvx2 b) { return _mm256_cmp_pd(a.v, b.v, _CMP_LE_OQ); }
  static VecAvx2 cmp_eq(VecAvx2 a, VecAvx2 b) { return _mm256_cmp_pd(a.v, b.v, _CMP_EQ_OQ); }

  static VecAvx2 blend(VecAvx2 mask, VecAvx2 a, VecAvx2 b) {
    return _mm256_blendv_pd(b.v, a.v, mask.v);
  }
  static VecAvx2 and_(VecAvx2 a, VecAvx2 b) { return _mm256_and_pd(a.v, b.v); }
  static VecAvx2 or_(VecAvx2 a, VecAvx2 b) { return _mm256_or_pd(a.v, b.v); }
  static VecAvx2 xor_(VecAvx2 a, VecAvx2 b) { return _mm256_xor_pd(a.v, b.v); }

  static VecAvx2 pow2k(VecAvx2 k) {
    __m256d t = _mm256_add_pd(k.v, _mm256_set1_pd(6755399441055744.0));
    // low 32 bits of each lane now hold k as a two's-complement int32; adding
    // the 1023 bias and shifting into the exponent field only needs the low
    // 12 bits, which survive modulo 2^32 wraparound for negative k
    __m256i lo = _mm256_and_si256(_mm256_castpd_si256(t), _mm256_set1_epi64x(0xffffffffLL));
    __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(lo, _mm256_set1_epi64x(1023)), 52);
    return _mm256_castsi256_pd(bits);
  }

  static void frexp_parts(VecAvx2 x, VecAvx2& m, VecAvx2& e) {
    __m256i b = _mm256_castpd_si256(x.v);
    __m256i be = _mm256_and_si256(_mm256_srli_epi64(b, 52), _mm256_set1_epi64x(0x7ff));
    // int64 -> double for small non-negative values via the 2^52 trick
    __m256i magic = _mm256_castpd_si256(_mm256_set1_pd(4503599627370496.0));  // 2^52
    __m256d ed = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(be, magic)),
                               _mm256_set1_pd(4503599627370496.0));
    e = _mm256_sub_pd(ed, _mm256_set1_pd(1022.0));
    __m256i mant = _mm256_or_si256(_mm256_and_si256(b, _mm256_set1_epi64x(0x000fffffffffffffLL)),
                                   _mm256_set1_epi64x(0x3fe0000000000000LL));
    m = _mm256_castsi256_pd(mant);
  }

  static void low2bits(VecAvx2 k, VecAvx2& bit0, VecAvx2& bit1) {
    __m256d t = _mm256_add_pd(k.v, _mm256_set1_pd(6755399441055744.0));
    __m256i ki = _mm256_castpd_si256(t);
    __m256i b0 = _mm256_and_si256(ki, _mm256_set1_epi64x(1));
    __m256i b1 = _mm256_and_si256(ki, _mm256_set1_epi64x(2));
    bit0 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(b0, _mm256_set1_epi64x(1)));
    bit1 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(b1, _mm256_set1_epi64x(2)));
  }
};

}  // namespace lelong::kern
