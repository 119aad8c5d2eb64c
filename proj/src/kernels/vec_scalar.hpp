// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Reference backend: four explicit double lanes. Comparisons produce
// all-bits masks exactly like the vector unit, and every operation maps to
// one IEEE operation per lane, mirroring vec_avx2.hpp.
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

namespace lelong::kern {

struct VecScalar {
  static constexpr int W = 4;
  double v[4];

  static VecScalar load(const double* p) { return {p[0], p[1], p[2], p[3]}; }
  void store(double* p) const {
    p[0] = v[0]; p[1] = v[1]; p[2] = v[2]; p[3] = v[3];
  }
  static VecScalar bc(double x) { return {x, x, x, x}; }

  friend VecScalar operator+(VecScalar a, VecScalar b) {
    return {a.v[0] + b.v[0], a.v[1] + b.v[1], a.v[2] + b.v[2], a.v[3] + b.v[3]};
  }
  friend VecScalar operator-(VecScalar a, VecScalar b) {
    return {a.v[0] - b.v[0], a.v[1] - b.v[1], a.v[2] - b.v[2], a.v[3] - b.v[3]};
  }
  friend VecScalar operator*(VecScalar a, VecScalar b) {
    return {a.v[0] * b.v[0], a.v[1] * b.v[1], a.v[2] * b.v[2], a.v[3] * b.v[3]};
  }
  friend VecScalar operator/(VecScalar a, VecScalar b) {
    return {a.v[0] / b.v[0], a.v[1] / b.v[1], a.v[2] / b.v[2], a.v[3] / b.v[3]};
  }
  static VecScalar fma(VecScalar a, VecScalar b, VecScalar c) {
    return {std::fma(a.v[0], b.v[0], c.v[0]), std::fma(a.v[1], b.v[1], c.v[1]),
            std::fma(a.v[2], b.v[2], c.v[2]), std::fma(a.v[3], b.v[3], c.v[3])};
  }
  static VecScalar max(VecScalar a, VecScalar b) {
    // matches _mm256_max_pd: returns b when either operand is NaN is not
    // relied upon; inputs are non-NaN on these paths
    return {a.v[0] > b.v[0] ? a.v[0] : b.v[0], a.v[1] > b.v[1] ? a.v[1] : b.v[1],
            a.v[2] > b.v[2] ? a.v[2] : b.v[2], a.v[3] > b.v[3] ? a.v[3] : b.v[3]};
  }
  static VecScalar min(VecScalar a, VecScalar b) {
    return {a.v[0] < b.v[0] ? a.v[0] : b.v[0], a.v[1] < b.v[1] ? a.v[1] : b.v[1],
            a.v[2] < b.v[2] ? a.v[2] : b.v[2], a.v[3] < b.v[3] ? a.v[3] : b.v[3]};
  }
  static VecScalar floor(VecScalar a) {
    return {std::floor(a.v[0]), std::floor(a.v[1]), std::floor(a.v[2]), std::floor(a.v[3])};
  }
  static VecScalar sqrt(VecScalar a) {
    return {std::sqrt(a.v[0]), std::sqrt(a.v[1]), std::sqrt(a.v[2]), std::sqrt(a.v[3])};
  }

  static VecScalar cmp_lt(VecScalar a, VecScalar b) { return mask4(a.v[0] < b.v[0], a.v[1] < b.v[1], a.v[2] < b.v[2], a.v[3] < b.v[3]); }
  static VecScalar cmp_le(VecScalar a, VecScalar b) { return mask4(a.v[0] <= b.v[0], a.v[1] <= b.v[1], a.v[2] <= b.v[2], a.v[3] <= b.v[3]); }
  static VecScalar cmp_eq(VecScalar a, VecScalar b) { return mask4(a.v[0] == b.v[0], a.v[1] == b.v[1], a.v[2] == b.v[2], a.v[3] == b.v[3]); }

  // mask ? a : b, bitwise per lane
  static VecScalar blend(VecScalar mask, VecScalar a, VecScalar b) {
    VecScalar r;
    for (int i = 0; i < 4; ++i) {
      std::uint64_t m = std::bit_cast<std::uint64_t>(mask.v[i]);
      std::uint64_t x = (std::bit_cast<std::uint64_t>(a.v[i]) & m) |
                        (std::bit_cast<std::uint64_t>(b.v[i]) & ~m);
      r.v[i] = std::bit_cast<double>(x);
    }
    return r;
  }
  static VecScalar and_(VecScalar a, VecScalar b) {
    VecScalar r;
    for (int i = 0; i < 4; ++i)
      r.v[i] = std::bit_cast<double>(std::bit_cast<std::uint64_t>(a.v[i]) &
                                     std::bit_cast<std::uint64_t>(b.v[i]));
    return r;
  }
  static VecScalar or_(VecScalar a, VecScalar b) {
    VecScalar r;
    for (int i = 0; i < 4; ++i)
      r.v[i] = std::bit_cast<double>(std::bit_cast<std::uint64_t>(a.v[i]) |
                                     std::bit_cast<std::uint64_t>(b.v[i]));
    return r;
  }
  static VecScalar xor_(VecScalar a, VecScalar b) {
    VecScalar r;
    for (int i = 0; i < 4; ++i)
      r.v[i] = std::bit_cast<double>(std::bit_cast<std::uint64_t>(a.v[i]) ^
                                     std::bit_cast<std::uint64_t>(b.v[i]));
    return r;
  }

  // 2^k from an integer-valued double k in [-1022, 1024)
  static VecScalar pow2k(VecScalar k) {
    VecScalar r;
    for (int i = 0; i < 4; ++i) {
      double t = k.v[i] + 6755399441055744.0;  // 1.5 * 2^52 round-to-int trick
      std::int64_t ki = static_cast<std::int32_t>(std::bit_cast<std::int64_t>(t));
      r.v[i] = std::bit_cast<double>((ki + 1023) << 52);
    }
    return r;
  }
  // biased exponent field minus 1022, as double; mantissa remapped to [0.5, 1)
  static void frexp_parts(VecScalar x, VecScalar& m, VecScalar& e) {
    for (int i = 0; i < 4; ++i) {
      std::uint64_t b = std::bit_cast<std::uint64_t>(x.v[i]);
      std::int64_t be = static_cast<std::int64_t>((b >> 52) & 0x7ff);
      e.v[i] = static_cast<double>(be - 1022);
      m.v[i] = std::bit_cast<double>((b & 0x000fffffffffffffULL) | 0x3fe0000000000000ULL);
    }
  }
  // low 2 bits of the integer-valued double k, as lane masks (bit0, bit1)
  static void low2bits(VecScalar k, VecScalar& bit0, VecScalar& bit1) {
    for (int i = 0; i < 4; ++i) {
      double t = k.v[i] + 6755399441055744.0;
      std::int64_t ki = static_cast<std::int32_t>(std::bit_cast<std::int64_t>(t));
      bit0.v[i] = std::bit_cast<double>((ki & 1) ? ~0ULL : 0ULL);
      bit1.v[i] = std::bit_cast<double>((ki & 2) ? ~0ULL : 0ULL);
    }
  }

 private:
  static VecScalar mask4(bool a, bool b, bool c, bool d) {
    VecScalar r;
    r.v[0] = std::bit_cast<double>(a ? ~0ULL : 0ULL);
    r.v[1] = std::bit_cast<double>(b ? ~0ULL : 0ULL);
    r.v[2] = std::bit_cast<double>(c ? ~0ULL : 0ULL);
    r.v[3] = std::bit_cast<double>(d ? ~0ULL : 0ULL);
    return r;
  }
};

}  // namespace lelong::kern
