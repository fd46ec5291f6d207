#pragma once
// Exact q-expansion arithmetic.  IntSeries holds __int128 coefficients on an
// integer exponent range and tracks how far each series is valid, so that
// products and quotients never silently claim coefficients they cannot know.
// GridSeries carries rational coefficients on a rational exponent grid
// exponent = (e0 + k)/den, used for eta-quotient-like and mock-theta series.

#include <vector>

#include "wind/arith.hpp"

namespace wind {

struct IntSeries {
  int m0 = 0;             // exponent of c[0]
  std::vector<i128> c;    // coefficient of q^(m0+k) is c[k]

  int end() const { return m0 + int(c.size()); }  // first unknown exponent
  i128 at(int m) const {
    if (m < m0 || m >= end()) return 0;
    return c[size_t(m - m0)];
  }
  static IntSeries monomial(i128 coeff, int exponent, int valid_end);
};

IntSeries is_add(const IntSeries& f, const IntSeries& g);
IntSeries is_sub(const IntSeries& f, const IntSeries& g);
IntSeries is_mul(const IntSeries& f, const IntSeries& g);
IntSeries is_scale(const IntSeries& f, i128 s);
// exact division f/g; throws std::domain_error if any step is not divisible
IntSeries is_div_exact(const IntSeries& f, const IntSeries& g);
IntSeries is_qderiv(const IntSeries& f);  // q d/dq
bool is_equal(const IntSeries& f, const IntSeries& g);  // on common range
Cplx is_eval(const IntSeries& f, Cplx q);

// classical level-one series, exact to q^(order-1)
IntSeries eisenstein4(int order);
IntSeries eisenstein6(int order);
IntSeries delta_series(int order);      // (E4^3 - E6^2)/1728
IntSeries j_series(int order);          // E4^3 / delta, starts at q^-1
IntSeries euler_product(int order);     // prod (1-q^n) via pentagonal numbers
IntSeries partition_series(int order);  // 1/prod(1-q^n)

// series over the exponent grid (e0+k)/den with rational coefficients
struct GridSeries {
  i64 den = 1;
  i64 e0 = 0;
  std::vector<Rational> c;

  i64 end() const { return e0 + i64(c.size()); }
  Rational at_index(i64 e) const {  // coefficient of q^(e/den)
    if (e < e0 || e >= end()) return Rational(0);
    return c[size_t(e - e0)];
  }
  Rational min_exponent() const;  // exponent of first nonzero coefficient
  bool is_zero() const;
};

GridSeries gs_from_int(const IntSeries& f);
GridSeries gs_rebase(const GridSeries& f, i64 new_den);
GridSeries gs_add(const GridSeries& f, const GridSeries& g);
GridSeries gs_sub(const GridSeries& f, const GridSeries& g);
GridSeries gs_mul(const GridSeries& f, const GridSeries& g);
GridSeries gs_scale(const GridSeries& f, const Rational& s);
GridSeries gs_shift(const GridSeries& f, const Rational& p);  // multiply by q^p
// substitute q -> q^(num/dnm): exponents scale by num/dnm
GridSeries gs_power_subst(const GridSeries& f, i64 num, i64 dnm);
// substitute q -> -q; requires integral exponent grid (den == 1)
GridSeries gs_alternate(const GridSeries& f);
bool gs_equal(const GridSeries& f, const GridSeries& g);  // on common range
Cplx gs_eval_tau(const GridSeries& f, Cplx tau);  // sum c_k e(tau*(e0+k)/den)

}  // namespace wind
