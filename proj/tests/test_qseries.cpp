#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wind/qseries.hpp"

using namespace wind;

TEST_CASE("series add/mul/window bookkeeping") {
  // f = 1 + q (known to q^4), g = 1 - q (known to q^2)
  IntSeries f = IntSeries::monomial(1, 0, 5);
  f.c[1] = 1;
  IntSeries g = IntSeries::monomial(1, 0, 3);
  g.c[1] = -1;
  IntSeries p = is_mul(f, g);
  CHECK(p.m0 == 0);
  CHECK(p.end() == 3);  // limited by g's window
  CHECK(p.at(0) == 1);
  CHECK(p.at(1) == 0);
  CHECK(p.at(2) == -1);
  IntSeries s = is_add(f, g);
  CHECK(s.at(0) == 2);
  CHECK(s.at(1) == 0);
}

TEST_CASE("exact division inverts multiplication") {
  IntSeries f = IntSeries::monomial(1, -1, 8);  // q^-1 + 2 + 3q
  f.c[1] = 2;
  f.c[2] = 3;
  IntSeries g = IntSeries::monomial(1, 1, 8);  // q - q^3
  g.c[2] = -1;
  IntSeries p = is_mul(f, g);
  IntSeries back = is_div_exact(p, g);
  CHECK(is_equal(back, f));
  CHECK(back.m0 == f.m0);
}

TEST_CASE("pentagonal numbers and partitions") {
  IntSeries e = euler_product(13);
  // 1 - q - q^2 + q^5 + q^7 - q^12 ...
  CHECK(e.at(0) == 1);
  CHECK(e.at(1) == -1);
  CHECK(e.at(2) == -1);
  CHECK(e.at(3) == 0);
  CHECK(e.at(5) == 1);
  CHECK(e.at(7) == 1);
  CHECK(e.at(12) == -1);
  IntSeries p = partition_series(11);
  i128 expect[] = {1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
  for (int n = 0; n <= 10; ++n) CHECK(p.at(n) == expect[n]);
}

TEST_CASE("discriminant cusp form coefficients") {
  IntSeries d = delta_series(8);
  CHECK(d.at(0) == 0);
  CHECK(d.at(1) == 1);
  CHECK(d.at(2) == -24);
  CHECK(d.at(3) == 252);
  CHECK(d.at(4) == -1472);
  CHECK(d.at(5) == 4830);
  CHECK(d.at(6) == -6048);
  CHECK(d.at(7) == -16744);
}

TEST_CASE("j-invariant expansion, two exact routes") {
  int const M = 26;
  IntSeries j1 = j_series(M);
  CHECK(j1.m0 == -1);
  CHECK(j1.at(-1) == 1);
  CHECK(j1.at(0) == 744);
  CHECK(j1.at(1) == 196884);
  CHECK(j1.at(2) == 21493760);
  CHECK(j1.at(3) == 864299970);
  CHECK(to_string_i128(j1.at(4)) == "20245856256");
  // independent route: j - 1728 = E6^2/Delta
  int inner = M + 3;
  IntSeries e6 = eisenstein6(inner);
  IntSeries j2 = is_div_exact(is_mul(e6, e6), delta_series(inner));
  j2 = is_add(j2, IntSeries::monomial(1728, 0, j2.end()));
  CHECK(is_equal(j1, j2));
  CHECK(j2.end() >= M);
}

TEST_CASE("series evaluation at a point") {
  IntSeries f = IntSeries::monomial(1, -1, 4);  // q^-1 + 2q
  f.c[2] = 2;
  Cplx q(0.25, 0.25);
  Cplx want = Cplx(1, 0) / q + Cplx(2, 0) * q;
  CHECK(std::abs(is_eval(f, q) - want) < 1e-14);
}

TEST_CASE("grid series basics") {
  // f = q^{-1/24}(1 + q)
  GridSeries f;
  f.den = 24;
  f.e0 = -1;
  f.c.assign(25, Rational(0));
  f.c[0] = Rational(1);
  f.c[24] = Rational(1);
  CHECK(f.min_exponent() == Rational(-1, 24));

  GridSeries shifted = gs_shift(f, Rational(1, 24));
  CHECK(shifted.min_exponent() == Rational(0));

  // (1+q)(1-q) = 1 - q^2
  GridSeries a;
  a.den = 1;
  a.e0 = 0;
  a.c = {Rational(1), Rational(1), Rational(0), Rational(0)};
  GridSeries b;
  b.den = 1;
  b.e0 = 0;
  b.c = {Rational(1), Rational(-1), Rational(0), Rational(0)};
  GridSeries p = gs_mul(a, b);
  CHECK(p.at_index(0) == Rational(1));
  CHECK(p.at_index(1) == Rational(0));
  CHECK(p.at_index(2) == Rational(-1));
}

TEST_CASE("grid substitutions") {
  // g = 1 + q + q^2 -> g(-q) = 1 - q + q^2, then q -> q^{1/2}
  GridSeries g;
  g.den = 1;
  g.e0 = 0;
  g.c = {Rational(1), Rational(1), Rational(1)};
  GridSeries alt = gs_alternate(g);
  CHECK(alt.at_index(1) == Rational(-1));
  GridSeries h = gs_power_subst(alt, 1, 2);
  CHECK(h.den == 2);
  CHECK(h.at_index(0) == Rational(1));   // q^0
  CHECK(h.at_index(1) == Rational(-1));  // q^{1/2}
  CHECK(h.at_index(2) == Rational(1));   // q^1
  // evaluation matches termwise sum
  Cplx tau(0.3, 1.1);
  Cplx direct = gs_eval_tau(h, tau);
  Cplx expect(0, 0);
  const Cplx i2pi(0, 2 * PI);
  expect += std::exp(i2pi * tau * Real(0.0));
  expect -= std::exp(i2pi * tau * Real(0.5));
  expect += std::exp(i2pi * tau * Real(1.0));
  CHECK(std::abs(direct - expect) < 1e-14);
}

TEST_CASE("alternating substitution parity uses exponent not index") {
  GridSeries g;
  g.den = 1;
  g.e0 = -1;  // q^{-1} + q^0
  g.c = {Rational(1), Rational(1)};
  GridSeries alt = gs_alternate(g);
  CHECK(alt.at_index(-1) == Rational(-1));
  CHECK(alt.at_index(0) == Rational(1));
}
