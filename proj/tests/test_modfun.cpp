#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "wind/hyperbolic.hpp"
#include "wind/modfun.hpp"
#include "wind/qforms.hpp"
#include "wind/qseries.hpp"

using namespace wind;

namespace {

Mat2 random_gamma(std::mt19937& rng, int len) {
  Mat2 g = m_id();
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_int_distribution<i64> shift(-2, 2);
  for (int i = 0; i < len; ++i) {
    if (pick(rng) == 0) {
      g = m_mul(g, m_S());
    } else {
      g = m_mul(g, Mat2{1, shift(rng), 0, 1});
    }
  }
  return g;
}

}  // namespace

TEST_CASE("cached expansion agrees with an independent rearrangement") {
  IntSeries js = j_series(30);
  IntSeries e6 = eisenstein6(30);
  IntSeries alt = is_add(is_div_exact(is_mul(e6, e6), delta_series(30)),
                         IntSeries::monomial(1728, 0, 29));
  CHECK(is_equal(js, alt));

  CHECK(js.at(-1) == 1);
  CHECK(js.at(0) == 744);
  CHECK(js.at(1) == 196884);
  CHECK(js.at(2) == 21493760);
  CHECK(js.at(3) == 864299970);
  CHECK(js.at(4) == i128(20245856256LL));

  IntSeries del = delta_series(30);
  CHECK(del.at(1) == 1);
  CHECK(del.at(2) == -24);
  CHECK(del.at(3) == 252);
  CHECK(del.at(4) == -1472);
  CHECK(del.at(5) == 4830);
  CHECK(del.at(6) == -6048);
  CHECK(del.at(7) == -16744);
  CHECK(del.at(6) == del.at(2) * del.at(3));
  CHECK(del.at(10) == del.at(2) * del.at(5));

  // the truncation-tail majorant dominates every cached coefficient
  for (int m = 1; m < 30; ++m) {
    Real bound = std::exp(4 * PI * std::sqrt(Real(m)));
    CHECK(std::abs(static_cast<Real>(js.at(m))) <= bound);
  }
}

TEST_CASE("j at special points and invariance") {
  CHECK(std::abs(eval_j(Cplx(0, 1), 1e-10) - Real(1728)) < 1e-10);
  CHECK(std::abs(eval_j(Cplx(0.5, std::sqrt(Real(3)) / 2), 1e-9)) < 1e-8);
  CHECK(std::abs(eval_j(Cplx(0, 2), 1e-8) - Real(287496)) < 1e-8);
  CHECK(std::abs(eval_j(Cplx(0.5, std::sqrt(Real(7)) / 2), 1e-8) + Real(3375)) < 1e-8);
  CHECK(std::abs(eval_j(Cplx(0, std::sqrt(Real(3))), 1e-8) - Real(54000)) < 1e-7);

  std::mt19937 rng(4711);
  std::uniform_real_distribution<Real> xr(-2, 2), yr(0.4, 1.4);
  for (int it = 0; it < 60; ++it) {
    // the reduced point can sit high on the cylinder where |j| ~ 1e7, so the
    // comparisons scale with the value
    Cplx z(xr(rng), yr(rng));
    Cplx jz = eval_j(z, 1e-7);
    Real scale = 1 + std::abs(jz);
    CHECK(std::abs(eval_j(z + Real(1), 1e-7) - jz) < 1e-8 * scale);
    Mat2 g = random_gamma(rng, 4);
    Cplx gz = moebius(g, z);
    if (gz.imag() > 1e-4) CHECK(std::abs(eval_j(gz, 1e-6) - jz) < 1e-7 * scale);
  }

  CHECK_THROWS_AS(eval_j(Cplx(0, -1), 1e-9), std::domain_error);
  CHECK_THROWS_AS(eval_j(Cplx(0.3, 0), 1e-9), std::domain_error);
  // far up the cylinder j ~ 1/q is astronomically large; an absolute
  // tolerance of 1e-10 is not deliverable in double precision
  CHECK_THROWS_AS(eval_j(Cplx(0, 10), 1e-10), precision_error);
  Cplx big = eval_j(Cplx(0, 10), 1e20);
  Cplx q10 = std::exp(Cplx(0, 2 * PI) * Cplx(0, 10));
  CHECK(std::abs(big * q10 - Cplx(1, 0) - Real(744) * q10) < 1e-12);
}

TEST_CASE("derivative: critical points, chain rule, difference quotient") {
  CHECK(std::abs(eval_jprime(Cplx(0, 1), 1e-6)) < 1e-6);
  CHECK(std::abs(eval_jprime(Cplx(0.5, std::sqrt(Real(3)) / 2), 1e-6)) < 1e-6);

  std::mt19937 rng(911);
  std::uniform_real_distribution<Real> xr(-0.45, 0.45), yr(0.9, 1.6);
  for (int it = 0; it < 40; ++it) {
    Cplx z(xr(rng), yr(rng));
    Cplx jp = eval_jprime(z, 1e-6);

    // Richardson-extrapolated central difference of eval_j
    Real h = 1e-3;
    auto cdiff = [&](Real step) {
      return (eval_j(z + step, 1e-9) - eval_j(z - step, 1e-9)) / (2 * step);
    };
    Cplx d = (Real(4) * cdiff(h / 2) - cdiff(h)) / Real(3);
    CHECK(std::abs(jp - d) < 1e-4 * (1 + std::abs(jp)));

    // weight-two transformation through an explicit matrix
    Mat2 g = random_gamma(rng, 4);
    Cplx gz = moebius(g, z);
    if (gz.imag() > 1e-3) {
      Cplx lhs = eval_jprime(gz, 1e-4);
      Cplx rhs = jp / moebius_jacobian(g, z);
      CHECK(std::abs(lhs - rhs) < 1e-4 * (1 + std::abs(rhs)));
    }
  }
}

TEST_CASE("logarithmic differential: limit at the cusp, periodicity, pole guard") {
  Cplx g10 = eval_eta_jlog(Cplx(0, 10), 1e-9);
  CHECK(std::abs(g10 + Cplx(0, 2 * PI)) < 1e-8);

  std::mt19937 rng(333);
  std::uniform_real_distribution<Real> xr(-1, 1), yr(0.6, 2.0);
  for (int it = 0; it < 40; ++it) {
    Cplx z(xr(rng), yr(rng));
    if (std::abs(z - Cplx(0, 1)) < 0.05) continue;
    Cplx g = eval_eta_jlog(z, 1e-8);
    CHECK(std::abs(eval_eta_jlog(z + Real(1), 1e-8) - g) < 1e-7);
    ThirdKindForm flipped{-1};
    CHECK(std::abs(eval_form(flipped, z, 1e-8) + g) < 1e-14);
  }

  CHECK_THROWS_AS(eval_eta_jlog(Cplx(1e-8, 1.0 + 1e-8), 1e-8), pole_error);
  CHECK_THROWS_AS(eval_eta_jlog(Cplx(1.0, 1.0 + 1e-9), 1e-8), pole_error);
  CHECK_THROWS_AS(eval_eta_jlog(Cplx(0, -2), 1e-8), std::domain_error);
}

TEST_CASE("contour integrals reproduce the residue divisor") {
  ThirdKindForm base{+1};
  auto res = residue_divisor(base);
  REQUIRE(res.size() == 2);
  CHECK(res.at("i") == Rational(1));
  CHECK(res.at("oo") == Rational(-1));
  CHECK(res.at("i") + res.at("oo") == Rational(0));
  auto flipped = residue_divisor(ThirdKindForm{-1});
  CHECK(flipped.at("i") == Rational(-1));
  CHECK(flipped.at("oo") == Rational(1));

  // residue at [oo] in the coordinate q: horizontal loop high on the cylinder
  {
    int K = 64;
    Cplx sum = 0;
    for (int k = 0; k < K; ++k) {
      Real x = (k + Real(0.5)) / K;
      sum += eval_eta_jlog(Cplx(x, 10), 1e-9);
    }
    Cplx r_oo = sum / Real(K) / Cplx(0, 2 * PI);
    CHECK(std::abs(r_oo - Cplx(-1, 0)) < 1e-6);
  }

  // residue at [i]: a full loop in the local orbifold coordinate w = u^2 with
  // u = (z - i)/(z + i) lifts to the half-loop theta in [0, pi)
  {
    int K = 256;
    Real delta = 0.1;
    Cplx sum = 0;
    for (int k = 0; k < K; ++k) {
      Real theta = PI * (k + Real(0.5)) / K;
      Cplx u = delta * std::exp(Cplx(0, theta));
      Cplx z = Cplx(0, 1) * (Real(1) + u) / (Real(1) - u);
      Cplx dz_dtheta = Real(-2) * u / ((Real(1) - u) * (Real(1) - u));
      sum += eval_eta_jlog(z, 1e-9) * dz_dtheta;
    }
    Cplx r_i = sum * (PI / K) / Cplx(0, 2 * PI);
    CHECK(std::abs(r_i - Cplx(1, 0)) < 1e-6);
  }
}

TEST_CASE("tolerance certification is honest") {
  CHECK_NOTHROW(eval_j(Cplx(0.3, 0.9), 1e-9));
  CHECK_THROWS_AS(eval_j(Cplx(0.3, 0.9), 1e-15), precision_error);
  // raw evaluation never certifies, so extreme points still produce values
  Cplx raw = eval_j_raw(Cplx(0, 10));
  Cplx q10 = std::exp(Cplx(0, 2 * PI) * Cplx(0, 10));
  CHECK(std::abs(raw * q10 - Cplx(1, 0) - Real(744) * q10) < 1e-12);
  CHECK(std::abs(eval_j_raw(Cplx(0, 1)) - Real(1728)) < 1e-9);
}
