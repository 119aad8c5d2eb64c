// Copyright (c) 2026 The lelong authors.
// Licensed under the Apache License, Version 2.0; see LICENSE for details.
//
// Generic kernel bodies, instantiated once per Vec backend. Included by
// kernels_scalar.cpp and kernels_avx2.cpp with V defined. Coefficients are
// the classic Cephes-style ones; accuracy targets a few ulp, and both
// backends produce bit-identical output because they share this code.

#include <cmath>
#include <cstdint>
#include <limits>

#include "lelong/kernels.hpp"

namespace lelong::kern {
namespace {

constexpr double kLog2E = 1.4426950408889634074;
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;

template <class V>
inline V vexp_core(V x) {
  x = V::min(x, V::bc(708.0));
  x = V::max(x, V::bc(-708.0));
  V k = V::floor(V::fma(x, V::bc(kLog2E), V::bc(0.5)));
  V r = V::fma(k, V::bc(-kLn2Hi), x);
  r = V::fma(k, V::bc(-kLn2Lo), r);
  // Taylor series of exp on |r| <= ln2/2, degree 12
  V p = V::bc(2.0876756987868098979e-09);  // 1/12!
  p = V::fma(p, r, V::bc(2.5052108385441718775e-08));
  p = V::fma(p, r, V::bc(2.7557319223985890653e-07));
  p = V::fma(p, r, V::bc(2.7557319223985892511e-06));
  p = V::fma(p, r, V::bc(2.4801587301587301566e-05));
  p = V::fma(p, r, V::bc(1.9841269841269841253e-04));
  p = V::fma(p, r, V::bc(1.3888888888888889419e-03));
  p = V::fma(p, r, V::bc(8.3333333333333332177e-03));
  p = V::fma(p, r, V::bc(4.1666666666666664354e-02));
  p = V::fma(p, r, V::bc(1.6666666666666665741e-01));
  p = V::fma(p, r, V::bc(0.5));
  p = V::fma(p, r, V::bc(1.0));
  p = V::fma(p, r, V::bc(1.0));
  return p * V::pow2k(k);
}

template <class V>
inline V vlog_core(V x) {
  const V zero = V::bc(0.0);
  const V inf = V::bc(std::numeric_limits<double>::infinity());
  // lift subnormals into the normal range
  V tiny = V::cmp_lt(x, V::bc(2.2250738585072014e-308));
  V xs = V::blend(tiny, x * V::bc(18014398509481984.0), x);  // * 2^54
  V e0 = V::and_(tiny, V::bc(-54.0));

  V m, e;
  V::frexp_parts(xs, m, e);
  // m in [0.5, 1); renormalize to [sqrt(1/2), sqrt(2))
  V small = V::cmp_lt(m, V::bc(0.70710678118654752440));
  m = V::blend(small, m + m, m);
  e = V::blend(small, e - V::bc(1.0), e) + e0;

  V t = (m - V::bc(1.0)) / (m + V::bc(1.0));
  V s = t * t;
  V p = V::bc(1.0 / 19.0);
  p = V::fma(p, s, V::bc(1.0 / 17.0));
  p = V::fma(p, s, V::bc(1.0 / 15.0));
  p = V::fma(p, s, V::bc(1.0 / 13.0));
  p = V::fma(p, s, V::bc(1.0 / 11.0));
  p = V::fma(p, s, V::bc(1.0 / 9.0));
  p = V::fma(p, s, V::bc(1.0 / 7.0));
  p = V::fma(p, s, V::bc(1.0 / 5.0));
  p = V::fma(p, s, V::bc(1.0 / 3.0));
  V u = t + t;
  V logm = V::fma(u * s, p, u);
  V r = V::fma(e, V::bc(kLn2Hi), logm);
  r = V::fma(e, V::bc(kLn2Lo), r);

  r = V::blend(V::cmp_eq(x, zero), V::bc(-std::numeric_limits<double>::infinity()), r);
  r = V::blend(V::cmp_eq(x, inf), inf, r);
  return r;
}

template <class V>
inline void vsincos_core(V x, V& sr, V& cr) {
  // reduce to |r| <= pi/4 with quadrant index k
  V k = V::floor(V::fma(x, V::bc(0.63661977236758134308), V::bc(0.5)));  // 2/pi
  V r = V::fma(k, V::bc(-1.5707963267341256e+00), x);
  r = V::fma(k, V::bc(-6.0771005065061922e-11), r);
  r = V::fma(k, V::bc(-2.0222662487959506e-21), r);
  V s2 = r * r;

  V ps = V::bc(1.58962301576546568060e-10);  // sin poly on r^2
  ps = V::fma(ps, s2, V::bc(-2.50507477628578072866e-08));
  ps = V::fma(ps, s2, V::bc(2.75573136213857245213e-06));
  ps = V::fma(ps, s2, V::bc(-1.98412698295895385996e-04));
  ps = V::fma(ps, s2, V::bc(8.33333333332211858878e-03));
  ps = V::fma(ps, s2, V::bc(-1.66666666666666307295e-01));
  V sinr = V::fma(ps * s2, r, r);

  V pc = V::bc(-1.13585365213876817300e-11);  // cos poly on r^2
  pc = V::fma(pc, s2, V::bc(2.08757008419747316778e-09));
  pc = V::fma(pc, s2, V::bc(-2.75573141792967388112e-07));
  pc = V::fma(pc, s2, V::bc(2.48015872888517179954e-05));
  pc = V::fma(pc, s2, V::bc(-1.38888888888730564116e-03));
  pc = V::fma(pc, s2, V::bc(4.16666666666665929218e-02));
  V cosr = V::fma(V::fma(pc, s2, V::bc(-0.5)), s2, V::bc(1.0));

  V bit0, bit1;
  V::low2bits(k, bit0, bit1);
  // quadrant logic: sin swaps to cos for odd k, signs flip by quadrant
  V ssel = V::blend(bit0, cosr, sinr);
  V csel = V::blend(bit0, sinr, cosr);
  const V negzero = V::bc(-0.0);
  sr = V::xor_(ssel, V::and_(bit1, negzero));
  cr = V::xor_(csel, V::and_(V::xor_(bit0, bit1), negzero));
}

template <class V>
inline V vnorm_icdf_core(V p) {
  // Acklam's rational approximation, |relative error| < 1.2e-9
  const V plow = V::bc(0.02425);
  V q = p - V::bc(0.5);

  // central: x = q (a(r) / b(r)), r = q^2
  V r = q * q;
  V na = V::bc(-3.969683028665376e+01);
  na = V::fma(na, r, V::bc(2.209460984245205e+02));
  na = V::fma(na, r, V::bc(-2.759285104469687e+02));
  na = V::fma(na, r, V::bc(1.383577518672690e+02));
  na = V::fma(na, r, V::bc(-3.066479806614716e+01));
  na = V::fma(na, r, V::bc(2.506628277459239e+00));
  V da = V::bc(-5.447609879822406e+01);
  da = V::fma(da, r, V::bc(1.615858368580409e+02));
  da = V::fma(da, r, V::bc(-1.556989798598866e+02));
  da = V::fma(da, r, V::bc(6.680131188771972e+01));
  da = V::fma(da, r, V::bc(-1.328068155288572e+01));
  da = V::fma(da, r, V::bc(1.0));
  V central = q * na / da;

  // tails: x = +-(c(s) / d(s)), s = sqrt(-2 log(ptail))
  V pt = V::min(p, V::bc(1.0) - p);
  pt = V::max(pt, V::bc(1e-300));
  V s = V::sqrt(V::bc(-2.0) * vlog_core(pt));
  V nc = V::bc(-7.784894002430293e-03);
  nc = V::fma(nc, s, V::bc(-3.223964580411365e-01));
  nc = V::fma(nc, s, V::bc(-2.400758277161838e+00));
  nc = V::fma(nc, s, V::bc(-2.549732539343734e+00));
  nc = V::fma(nc, s, V::bc(4.374664141464968e+00));
  nc = V::fma(nc, s, V::bc(2.938163982698783e+00));
  V dc = V::bc(7.784695709041462e-03);
  dc = V::fma(dc, s, V::bc(3.224671290700398e-01));
  dc = V::fma(dc, s, V::bc(2.445134137142996e+00));
  dc = V::fma(dc, s, V::bc(3.754408661907416e+00));
  dc = V::fma(dc, s, V::bc(1.0));
  V tail = nc / dc;
  V hightail = V::cmp_lt(V::bc(1.0) - plow, p);
  V tails = V::blend(hightail, V::bc(0.0) - tail, tail);

  V lowmask = V::cmp_lt(p, plow);
  V tailmask = V::or_(lowmask, hightail);
  return V::blend(tailmask, tails, central);
}

template <class V>
struct Body {
  static void vexp(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; i += 4) vexp_core(V::load(x + i)).store(y + i);
  }
  static void vlog(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; i += 4) vlog_core(V::load(x + i)).store(y + i);
  }
  static void vsincos(const double* x, double* s, double* c, std::size_t n) {
    for (std::size_t i = 0; i < n; i += 4) {
      V sr, cr;
      vsincos_core(V::load(x + i), sr, cr);
      sr.store(s + i);
      cr.store(c + i);
    }
  }
  static void vnorm_icdf(const double* u, double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; i += 4) vnorm_icdf_core(V::load(u + i)).store(z + i);
  }
  static void vlogabs2(const double* re, const double* im, double halfalpha, double* out,
                       std::size_t n) {
    const V ha = V::bc(halfalpha);
    for (std::size_t i = 0; i < n; i += 4) {
      V r = V::load(re + i), m = V::load(im + i);
      V a2 = V::fma(r, r, m * m);
      (ha * vlog_core(a2)).store(out + i);
    }
  }
  static void vadd(double* y, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; i += 4) (V::load(y + i) + V::load(x + i)).store(y + i);
  }
  static void vmax(double* y, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; i += 4) V::max(V::load(y + i), V::load(x + i)).store(y + i);
  }
  static void vscale_shift(double* y, double c, double d, std::size_t n) {
    const V vc = V::bc(c), vd = V::bc(d);
    for (std::size_t i = 0; i < n; i += 4) V::fma(V::load(y + i), vc, vd).store(y + i);
  }
  static void vlse2(double* acc, const double* x, std::size_t n) {
    const V ninf = V::bc(-std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; i += 4) {
      V a = V::load(acc + i), b = V::load(x + i);
      V m = V::max(a, b), lo = V::min(a, b);
      V d = lo - m;
      // exp(-inf - -inf) would be NaN; route -inf lanes to -inf at the end
      V safe = V::blend(V::cmp_eq(m, ninf), V::bc(-1.0), d);
      V r = m + vlog_core(V::bc(1.0) + vexp_core(safe));
      V both_ninf = V::cmp_eq(m, ninf);
      V::blend(both_ninf, ninf, r).store(acc + i);
    }
  }
  static void poly_eval(const PolyProg& prog, const double* const* re, const double* const* im,
                        double* out_re, double* out_im, std::size_t n) {
    const std::size_t nm = prog.coeff_re.size();
    for (std::size_t i = 0; i < n; i += 4) {
      V acc_re = V::bc(0.0), acc_im = V::bc(0.0);
      for (std::size_t m = 0; m < nm; ++m) {
        V cr = V::bc(prog.coeff_re[m]), ci = V::bc(prog.coeff_im[m]);
        for (int f = prog.offset[m]; f < prog.offset[m + 1]; ++f) {
          const int var = prog.factor_var[f];
          V zr = V::load(re[var] + i), zi = V::load(im[var] + i);
          V t = ci * zi;
          V nre = V::fma(cr, zr, V::bc(0.0) - t);
          V u = ci * zr;
          ci = V::fma(cr, zi, u);
          cr = nre;
        }
        acc_re = acc_re + cr;
        acc_im = acc_im + ci;
      }
      acc_re.store(out_re + i);
      acc_im.store(out_im + i);
    }
  }
  static double reduce_sum(const double* x, std::size_t n) {
    V acc = V::bc(0.0);
    for (std::size_t i = 0; i < n; i += 4) acc = acc + V::load(x + i);
    double t[4];
    acc.store(t);
    return (t[0] + t[1]) + (t[2] + t[3]);
  }
  static double reduce_max(const double* x, std::size_t n) {
    V acc = V::bc(-std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; i += 4) acc = V::max(acc, V::load(x + i));
    double t[4];
    acc.store(t);
    double a = t[0] > t[1] ? t[0] : t[1];
    double b = t[2] > t[3] ? t[2] : t[3];
    return a > b ? a : b;
  }
};

template <class V>
KernelTable make_table(const char* name) {
  KernelTable t;
  t.name = name;
  t.vexp = &Body<V>::vexp;
  t.vlog = &Body<V>::vlog;
  t.vsincos = &Body<V>::vsincos;
  t.vnorm_icdf = &Body<V>::vnorm_icdf;
  t.vlogabs2 = &Body<V>::vlogabs2;
  t.vadd = &Body<V>::vadd;
  t.vmax = &Body<V>::vmax;
  t.vscale_shift = &Body<V>::vscale_shift;
  t.vlse2 = &Body<V>::vlse2;
  t.poly_eval = &Body<V>::poly_eval;
  t.reduce_sum = &Body<V>::reduce_sum;
  t.reduce_max = &Body<V>::reduce_max;
  return t;
}

}  // namespace
}  // namespace lelong::kern
