#include "wind/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wind {

IntSeries IntSeries::monomial(i128 coeff, int exponent, int valid_end) {
  IntSeries s;
  s.m0 = exponent;
  if (valid_end <= exponent) throw std::domain_error("empty series window");
  s.c.assign(size_t(valid_end - exponent), 0);
  s.c[0] = coeff;
  return s;
}

IntSeries is_add(const IntSeries& f, const IntSeries& g) {
  IntSeries r;
  r.m0 = std::min(f.m0, g.m0);
  int e = std::min(f.end(), g.end());
  if (e <= r.m0) throw std::domain_error("series windows do not overlap");
  r.c.assign(size_t(e - r.m0), 0);
  for (int m = r.m0; m < e; ++m) r.c[size_t(m - r.m0)] = add_i128(f.at(m), g.at(m));
  return r;
}

IntSeries is_sub(const IntSeries& f, const IntSeries& g) {
  return is_add(f, is_scale(g, -1));
}

IntSeries is_scale(const IntSeries& f, i128 s) {
  IntSeries r = f;
  for (auto& x : r.c) x = mul_i128(x, s);
  return r;
}

IntSeries is_mul(const IntSeries& f, const IntSeries& g) {
  IntSeries r;
  r.m0 = f.m0 + g.m0;
  int e = std::min(f.end() + g.m0, g.end() + f.m0);
  if (e <= r.m0) throw std::domain_error("series windows do not overlap");
  r.c.assign(size_t(e - r.m0), 0);
  for (int i = f.m0; i < f.end(); ++i) {
    i128 fi = f.at(i);
    if (fi == 0) continue;
    int jmax = std::min(g.end(), e - i);
    for (int j = g.m0; j < jmax; ++j) {
      size_t k = size_t(i + j - r.m0);
      r.c[k] = add_i128(r.c[k], mul_i128(fi, g.at(j)));
    }
  }
  return r;
}

IntSeries is_div_exact(const IntSeries& f, const IntSeries& g) {
  // trim leading zeros of g so the pivot is nonzero
  IntSeries gg = g;
  while (!gg.c.empty() && gg.c.front() == 0) {
    gg.c.erase(gg.c.begin());
    ++gg.m0;
  }
  if (gg.c.empty()) throw std::domain_error("division by zero series");
  i128 g0 = gg.c.front();
  IntSeries r;
  r.m0 = f.m0 - gg.m0;
  int e = std::min(f.end() - gg.m0, f.m0 + gg.end() - 2 * gg.m0);
  if (e <= r.m0) throw std::domain_error("series windows do not overlap");
  r.c.assign(size_t(e - r.m0), 0);
  for (int m = r.m0; m < e; ++m) {
    i128 acc = f.at(m + gg.m0);
    for (int j = r.m0; j < m; ++j) {
      i128 t = mul_i128(r.at(j), gg.at(m + gg.m0 - j));
      acc = add_i128(acc, -t);
    }
    if (acc % g0 != 0) throw std::domain_error("inexact series division");
    r.c[size_t(m - r.m0)] = acc / g0;
  }
  return r;
}

IntSeries is_qderiv(const IntSeries& f) {
  IntSeries r = f;
  for (int m = r.m0; m < r.end(); ++m)
    r.c[size_t(m - r.m0)] = mul_i128(r.c[size_t(m - r.m0)], m);
  return r;
}

bool is_equal(const IntSeries& f, const IntSeries& g) {
  int lo = std::min(f.m0, g.m0), hi = std::min(f.end(), g.end());
  for (int m = lo; m < hi; ++m)
    if (f.at(m) != g.at(m)) return false;
  return true;
}

Cplx is_eval(const IntSeries& f, Cplx q) {
  Cplx acc(0, 0);
  for (size_t k = f.c.size(); k-- > 0;)
    acc = acc * q + Cplx(Real(double(f.c[k])), 0);
  if (f.m0 > 0)
    for (int i = 0; i < f.m0; ++i) acc *= q;
  else
    for (int i = 0; i < -f.m0; ++i) acc /= q;
  return acc;
}

namespace {
i128 sigma_k(int n, int k) {
  i128 s = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    i128 p = 1;
    for (int e = 0; e < k; ++e) p = mul_i128(p, d);
    s = add_i128(s, p);
  }
  return s;
}
}  // namespace

IntSeries eisenstein4(int order) {
  IntSeries s;
  s.m0 = 0;
  s.c.assign(size_t(order), 0);
  s.c[0] = 1;
  for (int n = 1; n < order; ++n) s.c[size_t(n)] = mul_i128(240, sigma_k(n, 3));
  return s;
}

IntSeries eisenstein6(int order) {
  IntSeries s;
  s.m0 = 0;
  s.c.assign(size_t(order), 0);
  s.c[0] = 1;
  for (int n = 1; n < order; ++n) s.c[size_t(n)] = mul_i128(-504, sigma_k(n, 5));
  return s;
}

IntSeries delta_series(int order) {
  IntSeries e4 = eisenstein4(order), e6 = eisenstein6(order);
  IntSeries num = is_sub(is_mul(is_mul(e4, e4), e4), is_mul(e6, e6));
  IntSeries d = num;
  for (auto& x : d.c) {
    if (x % 1728 != 0) throw std::domain_error("discriminant series not integral");
    x /= 1728;
  }
  return d;
}

IntSeries j_series(int order) {
  // compute at higher internal order so the quotient is valid to `order`
  int inner = order + 3;
  IntSeries e4 = eisenstein4(inner);
  IntSeries num = is_mul(is_mul(e4, e4), e4);
  IntSeries j = is_div_exact(num, delta_series(inner));
  if (j.end() < order) throw std::domain_error("series order bookkeeping failed");
  j.c.resize(size_t(order - j.m0));
  return j;
}

IntSeries euler_product(int order) {
  IntSeries s;
  s.m0 = 0;
  s.c.assign(size_t(order), 0);
  for (i64 k = -order; k <= order; ++k) {
    i64 e = k * (3 * k - 1) / 2;
    if (e >= 0 && e < order) s.c[size_t(e)] += (k % 2 == 0) ? 1 : -1;
  }
  return s;
}

IntSeries partition_series(int order) {
  return is_div_exact(IntSeries::monomial(1, 0, order), euler_product(order));
}

Rational GridSeries::min_exponent() const {
  for (size_t k = 0; k < c.size(); ++k)
    if (!c[k].is_zero()) return Rational(e0 + i64(k), den);
  throw std::domain_error("zero series has no minimal exponent");
}

bool GridSeries::is_zero() const {
  for (const auto& x : c)
    if (!x.is_zero()) return false;
  return true;
}

GridSeries gs_from_int(const IntSeries& f) {
  GridSeries r;
  r.den = 1;
  r.e0 = f.m0;
  r.c.reserve(f.c.size());
  for (const auto& x : f.c)
    r.c.push_back(Rational(checked_i64(x, "grid coefficient exceeds int64")));
  return r;
}

GridSeries gs_rebase(const GridSeries& f, i64 new_den) {
  if (new_den % f.den != 0) throw std::domain_error("grid denominators incompatible");
  i64 s = new_den / f.den;
  if (s == 1) return f;
  GridSeries r;
  r.den = new_den;
  r.e0 = f.e0 * s;
  // exponents strictly between grid points of f are exactly zero; the first
  // unknown exponent is f.end()/f.den, i.e. index f.end()*s on the new grid
  r.c.assign(size_t((f.end() - f.e0 - 1) * s + 1), Rational(0));
  for (size_t k = 0; k < f.c.size(); ++k) r.c[k * size_t(s)] = f.c[k];
  return r;
}

namespace {
i64 lcm64(i64 a, i64 b) { return a / gcd64(a, b) * b; }

GridSeries gs_combine(const GridSeries& f0, const GridSeries& g0, int sign) {
  i64 den = lcm64(f0.den, g0.den);
  GridSeries f = gs_rebase(f0, den), g = gs_rebase(g0, den);
  GridSeries r;
  r.den = den;
  r.e0 = std::min(f.e0, g.e0);
  i64 e = std::min(f.end(), g.end());
  if (e <= r.e0) throw std::domain_error("series windows do not overlap");
  r.c.assign(size_t(e - r.e0), Rational(0));
  for (i64 m = r.e0; m < e; ++m)
    r.c[size_t(m - r.e0)] =
        sign > 0 ? f.at_index(m) + g.at_index(m) : f.at_index(m) - g.at_index(m);
  return r;
}
}  // namespace

GridSeries gs_add(const GridSeries& f, const GridSeries& g) { return gs_combine(f, g, +1); }
GridSeries gs_sub(const GridSeries& f, const GridSeries& g) { return gs_combine(f, g, -1); }

GridSeries gs_mul(const GridSeries& f0, const GridSeries& g0) {
  i64 den = lcm64(f0.den, g0.den);
  GridSeries f = gs_rebase(f0, den), g = gs_rebase(g0, den);
  GridSeries r;
  r.den = den;
  r.e0 = f.e0 + g.e0;
  i64 e = std::min(f.end() + g.e0, g.end() + f.e0);
  if (e <= r.e0) throw std::domain_error("series windows do not overlap");
  r.c.assign(size_t(e - r.e0), Rational(0));
  for (i64 i = f.e0; i < f.end(); ++i) {
    Rational fi = f.at_index(i);
    if (fi.is_zero()) continue;
    i64 jmax = std::min(g.end(), e - i);
    for (i64 j = g.e0; j < jmax; ++j) {
      Rational gj = g.at_index(j);
      if (gj.is_zero()) continue;
      size_t k = size_t(i + j - r.e0);
      r.c[k] += fi * gj;
    }
  }
  return r;
}

GridSeries gs_scale(const GridSeries& f, const Rational& s) {
  GridSeries r = f;
  for (auto& x : r.c) x *= s;
  return r;
}

GridSeries gs_shift(const GridSeries& f, const Rational& p) {
  i64 den = lcm64(f.den, p.den);
  GridSeries r = gs_rebase(f, den);
  r.e0 += p.num * (den / p.den);
  return r;
}

GridSeries gs_power_subst(const GridSeries& f, i64 num, i64 dnm) {
  if (num <= 0 || dnm <= 0) throw std::domain_error("substitution power must be positive");
  GridSeries r;
  r.den = f.den * dnm;
  r.e0 = f.e0 * num;
  r.c.assign(size_t((f.end() - f.e0 - 1) * num + 1), Rational(0));
  for (size_t k = 0; k < f.c.size(); ++k) r.c[k * size_t(num)] = f.c[k];
  return r;
}

GridSeries gs_alternate(const GridSeries& f) {
  if (f.den != 1) throw std::domain_error("sign substitution needs integral exponents");
  GridSeries r = f;
  for (size_t k = 0; k < r.c.size(); ++k)
    if (mod_pos(r.e0 + i64(k), 2) == 1) r.c[k] = -r.c[k];
  return r;
}

bool gs_equal(const GridSeries& f0, const GridSeries& g0) {
  i64 den = lcm64(f0.den, g0.den);
  GridSeries f = gs_rebase(f0, den), g = gs_rebase(g0, den);
  i64 lo = std::min(f.e0, g.e0), hi = std::min(f.end(), g.end());
  for (i64 m = lo; m < hi; ++m)
    if (f.at_index(m) != g.at_index(m)) return false;
  return true;
}

Cplx gs_eval_tau(const GridSeries& f, Cplx tau) {
  Cplx acc(0, 0);
  const Cplx i2pi(0, 2 * PI);
  for (size_t k = 0; k < f.c.size(); ++k) {
    if (f.c[k].is_zero()) continue;
    Real e = Real(f.e0 + i64(k)) / Real(f.den);
    acc += f.c[k].to_real() * std::exp(i2pi * tau * e);
  }
  return acc;
}

}  // namespace wind
