#include "wind/modfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "wind/hyperbolic.hpp"
#include "wind/qforms.hpp"
#include "wind/qseries.hpp"

namespace wind {

namespace {

// coefficients of j up to q^38 stay well inside __int128
constexpr int kCachedOrder = 38;

struct JCache {
  std::vector<Real> j;    // coefficient of q^(k-1) at index k
  std::vector<Real> qdj;  // same window for q d/dq j
};

const JCache& j_cache() {
  static const JCache cache = [] {
    IntSeries js = j_series(kCachedOrder);
    IntSeries qd = is_qderiv(js);
    JCache c;
    c.j.reserve(js.c.size());
    c.qdj.reserve(qd.c.size());
    for (i128 v : js.c) c.j.push_back(static_cast<Real>(v));
    for (i128 v : qd.c) c.qdj.push_back(static_cast<Real>(v));
    return c;
  }();
  return cache;
}

// number of exponents to keep, from the reduced imaginary part
int pick_terms(Real y, Real tol) {
  Real t = std::max(tol, Real(1e-300));
  int m = int(std::ceil((std::log(1 / t) + 5) / (2 * PI * y))) + 10;
  return std::min(m + 2, kCachedOrder + 1);  // exponents -1 .. m
}

// sum_{m > last_exp} e^{4 pi sqrt(m)} |q|^m, a majorant for the dropped tail;
// the coefficient bound is checked against the exact series in the tests
Real tail_bound(Real absq, int last_exp, bool weight_by_m) {
  if (absq >= Real(0.05)) return std::numeric_limits<Real>::infinity();
  Real total = 0;
  for (int m = last_exp + 1; m < last_exp + 400; ++m) {
    Real term = std::exp(4 * PI * std::sqrt(Real(m)) + m * std::log(absq));
    if (weight_by_m) term *= m;
    total += term;
    if (term < total * Real(1e-22) || term < Real(1e-280)) break;
  }
  return total;
}

struct Evaluated {
  Cplx value;
  Real certified;  // truncation tail + rounding majorant
};

// Horner over exponents -1 .. -1+n_terms-1 with an absolute-value majorant
Evaluated eval_series(const std::vector<Real>& coeff, int n_terms, Cplx q,
                      bool weight_by_m) {
  int n = std::min<int>(n_terms, int(coeff.size()));
  Cplx acc = 0;
  Real mag = 0;
  Real absq = std::abs(q);
  for (int k = n - 1; k >= 0; --k) {
    acc = acc * q + coeff[size_t(k)];
    mag = mag * absq + std::abs(coeff[size_t(k)]);
  }
  acc /= q;
  mag /= absq;
  Real eps = std::numeric_limits<Real>::epsilon();
  Real rounding = 4 * Real(n + 2) * eps * mag;
  Real tail = tail_bound(absq, n - 2, weight_by_m);
  return {acc, tail + rounding};
}

struct ReducedPoint {
  Cplx z_red;
  Cplx q;
  Mat2 gamma;
};

ReducedPoint reduce_point(Cplx z) {
  auto [zr, g] = reduce_to_F(z);
  return {zr, std::exp(Cplx(0, 2 * PI) * zr), g};
}

}  // namespace

std::map<std::string, Rational> residue_divisor(const ThirdKindForm& form) {
  return {{"i", Rational(form.sign)}, {"oo", Rational(-form.sign)}};
}

Cplx eval_j(Cplx z, Real tol) {
  if (!(z.imag() > 0)) throw std::domain_error("eval_j: Im z must be positive");
  ReducedPoint p = reduce_point(z);
  Evaluated ev = eval_series(j_cache().j, pick_terms(p.z_red.imag(), tol), p.q, false);
  if (!(ev.certified <= tol))
    throw precision_error("eval_j: certified error exceeds the requested tolerance");
  return ev.value;
}

Cplx eval_j_raw(Cplx z) {
  if (!(z.imag() > 0)) throw std::domain_error("eval_j_raw: Im z must be positive");
  ReducedPoint p = reduce_point(z);
  return eval_series(j_cache().j, kCachedOrder + 1, p.q, false).value;
}

Cplx eval_jprime(Cplx z, Real tol) {
  if (!(z.imag() > 0)) throw std::domain_error("eval_jprime: Im z must be positive");
  ReducedPoint p = reduce_point(z);
  Evaluated ev = eval_series(j_cache().qdj, pick_terms(p.z_red.imag(), tol), p.q, true);
  // z_red = gamma z, so dj/dz picks up the jacobian of the reducing map
  Cplx jac = moebius_jacobian(p.gamma, z);
  Real scale = 2 * PI * std::abs(jac);
  if (!(ev.certified * scale <= tol))
    throw precision_error("eval_jprime: certified error exceeds the requested tolerance");
  return Cplx(0, 2 * PI) * ev.value * jac;
}

Cplx eval_eta_jlog(Cplx z, Real tol) {
  if (!(z.imag() > 0)) throw std::domain_error("eval_eta_jlog: Im z must be positive");
  ReducedPoint p = reduce_point(z);
  if (std::abs(p.z_red - Cplx(0, 1)) < Real(1e-6))
    throw pole_error("eval_eta_jlog: evaluation point is within 1e-6 of the orbit of i");

  int n_terms = pick_terms(p.z_red.imag(), tol * Real(1e-3));
  Evaluated num = eval_series(j_cache().qdj, n_terms, p.q, true);
  Evaluated den = eval_series(j_cache().j, n_terms, p.q, false);
  Cplx jac = moebius_jacobian(p.gamma, z);

  Cplx numerator = Cplx(0, 2 * PI) * num.value * jac;
  Cplx denominator = den.value - Real(1728);
  Real abs_den = std::abs(denominator);
  Cplx g = numerator / denominator;
  Real err = (2 * PI * num.certified * std::abs(jac) + std::abs(g) * den.certified) / abs_den;
  if (!(err <= tol))
    throw precision_error("eval_eta_jlog: certified error exceeds the requested tolerance");
  return g;
}

Cplx eval_form(const ThirdKindForm& form, Cplx z, Real tol) {
  return Real(form.sign) * eval_eta_jlog(z, tol);
}

}  // namespace wind
