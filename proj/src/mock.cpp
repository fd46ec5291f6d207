#include "wind/mock.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "wind/theta.hpp"

namespace wind {

Real gamma_upper_scaled(const Rational& s, Real x) {
  if (s != Rational(1, 2) && s != Rational(-1, 2))
    throw std::domain_error("scaled incomplete gamma supports orders 1/2 and -1/2 only");
  if (!(x > 0)) throw std::domain_error("scaled incomplete gamma needs x > 0");
  const Real sr = s.to_real();
  if (x < Real(1.5)) {
    // lower-tail series gamma(s,x) = x^s e^{-x} sum_n x^n / (s(s+1)...(s+n)),
    // subtracted from the complete value
    const Real gam = s.num > 0 ? std::sqrt(PI) : -2 * std::sqrt(PI);
    Real ap = sr, del = 1 / sr, sum = del;
    for (int n = 0; n < 300; ++n) {
      ap += 1;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-17)
        return gam * std::exp(x) - std::pow(x, sr) * sum;
    }
    throw precision_error("incomplete gamma series did not converge");
  }
  // upper-tail Lentz continued fraction; e^x Gamma(s,x) = x^s h
  const Real fpmin = 1e-300;
  Real b = x + 1 - sr, c = 1 / fpmin, d = 1 / b, h = d;
  for (int i = 1; i <= 300; ++i) {
    Real an = -Real(i) * (Real(i) - sr);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1 / d;
    Real del = d * c;
    h *= del;
    if (std::abs(del - 1) < 1e-16) return std::pow(x, sr) * h;
  }
  throw precision_error("incomplete gamma continued fraction did not converge");
}

VVVector eichler_integral(const VVSeries& g, const Rational& k, Cplx tau, Real tol) {
  if (k != Rational(1, 2) && k != Rational(3, 2))
    throw std::domain_error("completion integral supports weights 1/2 and 3/2 only");
  const Real u = tau.real(), v = tau.imag();
  if (!(v > 0)) throw std::domain_error("tau must lie in the upper half plane");
  if (!(tol > 0)) throw std::domain_error("tolerance must be positive");
  const Rational s = Rational(1) - k;
  const Real kr = k.to_real();
  const i64 size = 2 * g.n;
  VVVector out = VVVector::Zero(size);
  for (i64 h = 0; h < size; ++h) {
    for (const auto& [d, cf] : g.comps[size_t(h)]) {
      if (!cf.erfcs.empty() || !cf.gauss.empty())
        throw std::domain_error("shadow table must be purely holomorphic");
      if (cf.constant == Cplx(0, 0)) continue;
      if (d <= 0) throw std::domain_error("shadow table needs positive exponents");
      Real m = Real(d) / Real(4 * g.n);
      // (4 pi m)^{k-1} Gamma(1-k, 4 pi m v) e(-m conj(tau)), grouped so every
      // factor stays bounded
      Real mag = std::pow(4 * PI * m, kr - 1) *
                 gamma_upper_scaled(s, 4 * PI * m * v) * std::exp(-2 * PI * m * v);
      if (std::abs(cf.constant) * mag < tol * Real(1e-3)) continue;
      out[h] -= std::conj(cf.constant) * mag * e_of(-m * u);
    }
  }
  return out;
}

namespace {

VVVector dbar_fd(const std::function<VVVector(Cplx)>& F, Cplx tau, Real h) {
  VVVector du = (F(tau + h) - F(tau - h)) / (2 * h);
  VVVector dv = (F(tau + Cplx(0, h)) - F(tau - Cplx(0, h))) / (2 * h);
  return Real(0.5) * (du + Cplx(0, 1) * dv);
}

// one Richardson step over the central-difference conjugate derivative
VVVector dbar_extrap(const std::function<VVVector(Cplx)>& F, Cplx tau, Real step) {
  if (!(step > 0)) throw std::domain_error("difference step must be positive");
  if (!(tau.imag() > 2 * step))
    throw std::domain_error("difference stencil leaves the upper half plane");
  VVVector coarse = dbar_fd(F, tau, step);
  VVVector fine = dbar_fd(F, tau, step / 2);
  return (Real(4) * fine - coarse) / Real(3);
}

}  // namespace

VVVector xi_op(const std::function<VVVector(Cplx)>& F, const Rational& k,
               Cplx tau, Real step) {
  VVVector db = dbar_extrap(F, tau, step);
  Real vk = std::pow(tau.imag(), k.to_real());
  return Cplx(0, 2) * vk * db.conjugate();
}

VVVector lowering_op(const std::function<VVVector(Cplx)>& F, Cplx tau, Real step) {
  VVVector db = dbar_extrap(F, tau, step);
  Real v2 = tau.imag() * tau.imag();
  return Cplx(0, -2) * v2 * db;
}

namespace {

i64 det3(const Eigen::Matrix3i& g) {
  auto m = [&](int i, int j) { return i64(g(i, j)); };
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// integer adjugate, adj * G = det(G) * I
std::array<std::array<i64, 3>, 3> adj3(const Eigen::Matrix3i& g) {
  auto m = [&](int i, int j) { return i64(g(i, j)); };
  std::array<std::array<i64, 3>, 3> a{};
  a[0][0] = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  a[0][1] = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  a[0][2] = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  a[1][0] = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  a[1][1] = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  a[1][2] = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  a[2][0] = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  a[2][1] = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  a[2][2] = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return a;
}

}  // namespace

Sig21Lattice make_sig21(const Eigen::Matrix3i& gram) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (gram(i, j) != gram(j, i))
        throw std::domain_error("Gram matrix must be symmetric");
  for (int i = 0; i < 3; ++i)
    if (mod_pos(gram(i, i), 2) != 0)
      throw std::domain_error("Gram diagonal must be even");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(gram.cast<double>());
  int pos = 0, neg = 0;
  for (int i = 0; i < 3; ++i) {
    double ev = es.eigenvalues()[i];
    if (ev > 1e-9)
      ++pos;
    else if (ev < -1e-9)
      ++neg;
  }
  if (pos != 2 || neg != 1)
    throw std::domain_error("Gram matrix must have signature (2,1)");
  return Sig21Lattice{gram};
}

Sig21Lattice gamma0N_lattice(i64 N) {
  if (N < 1) throw std::domain_error("level must be positive");
  i64 two_n = checked_i64(mul_i128(2, N));
  if (two_n > std::numeric_limits<int>::max())
    throw std::overflow_error("level exceeds the Gram entry range");
  Eigen::Matrix3i g;
  g << 0, 0, -1, 0, int(two_n), 0, -1, 0, 0;
  return make_sig21(g);
}

Sig21Lattice quaternion_lattice() {
  Eigen::Matrix3i g;
  g << -2, 0, 0, 0, 6, 0, 0, 0, 6;
  return make_sig21(g);
}

i64 pairing(const Sig21Lattice& lat, const Vec3& x, const Vec3& y) {
  i64 acc = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      acc += x[size_t(i)] * i64(lat.gram(i, j)) * y[size_t(j)];
  return acc;
}

Rational pairing(const Sig21Lattice& lat, const Vec3Q& x, const Vec3Q& y) {
  Rational acc(0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      acc += x[size_t(i)] * Rational(lat.gram(i, j)) * y[size_t(j)];
  return acc;
}

Rational norm_of(const Sig21Lattice& lat, const Vec3Q& x) {
  return pairing(lat, x, x) / Rational(2);
}

std::vector<Vec3Q> dual_classes(const Sig21Lattice& lat) {
  const i64 det = det3(lat.gram);
  if (det == 0) throw std::domain_error("Gram matrix is degenerate");
  const auto adj = adj3(lat.gram);
  const i64 D = det < 0 ? -det : det;
  // G Z^3 contains D Z^3 because adj * G = det * I, so the box [0,D)^3 hits
  // every class of the dual quotient
  std::vector<Vec3Q> all;
  all.reserve(size_t(D * D * D));
  for (i64 x0 = 0; x0 < D; ++x0)
    for (i64 x1 = 0; x1 < D; ++x1)
      for (i64 x2 = 0; x2 < D; ++x2) {
        Vec3Q mu;
        for (int i = 0; i < 3; ++i)
          mu[size_t(i)] =
              Rational(adj[size_t(i)][0] * x0 + adj[size_t(i)][1] * x1 +
                           adj[size_t(i)][2] * x2,
                       det)
                  .frac();
        all.push_back(mu);
      }
  auto less3 = [](const Vec3Q& a, const Vec3Q& b) {
    for (int i = 0; i < 3; ++i)
      if (a[size_t(i)] != b[size_t(i)]) return a[size_t(i)] < b[size_t(i)];
    return false;
  };
  std::sort(all.begin(), all.end(), less3);
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all.size() != size_t(D))
    throw std::logic_error("dual class census does not match the determinant");
  return all;
}

namespace {

int sgn_i64(i64 v) { return (v > 0) - (v < 0); }

// common validated setup of the two-sided kernel
struct SidePrep {
  std::array<i64, 3> gc1{}, gc2{};  // G c1, G c2
  i64 cc1 = 0, cc2 = 0;
  i64 den = 1;                 // common denominator of the class
  std::array<i64, 3> hs{};     // den * h
  Real scale1 = 0, scale2 = 0; // sqrt(2/-(c,c)) for point sides
};

SidePrep prep_sides(const Sig21Lattice& lat, const Vec3& c1, const Vec3& c2,
                    const Vec3Q& h) {
  SidePrep p;
  p.cc1 = pairing(lat, c1, c1);
  p.cc2 = pairing(lat, c2, c2);
  if (p.cc1 > 0 || p.cc2 > 0)
    throw std::domain_error("side vectors must have nonpositive norm");
  auto zero3 = [](const Vec3& c) { return c[0] == 0 && c[1] == 0 && c[2] == 0; };
  if (zero3(c1) || zero3(c2))
    throw std::domain_error("side vectors must be nonzero");
  if (pairing(lat, c1, c2) >= 0)
    throw std::domain_error("side vectors must pair negatively");
  for (int i = 0; i < 3; ++i) {
    Rational gi(0);
    for (int j = 0; j < 3; ++j) gi += Rational(lat.gram(i, j)) * h[size_t(j)];
    if (!gi.is_integer())
      throw std::domain_error("class is not in the dual lattice");
  }
  for (int i = 0; i < 3; ++i) {
    i64 a1 = 0, a2 = 0;
    for (int j = 0; j < 3; ++j) {
      a1 += i64(lat.gram(i, j)) * c1[size_t(j)];
      a2 += i64(lat.gram(i, j)) * c2[size_t(j)];
    }
    p.gc1[size_t(i)] = a1;
    p.gc2[size_t(i)] = a2;
  }
  p.den = 1;
  for (const Rational& hi : h) p.den = p.den / gcd64(p.den, hi.den) * hi.den;
  for (int i = 0; i < 3; ++i)
    p.hs[size_t(i)] = h[size_t(i)].num * (p.den / h[size_t(i)].den);
  if (p.cc1 < 0) p.scale1 = std::sqrt(Real(2) / Real(-p.cc1));
  if (p.cc2 < 0) p.scale2 = std::sqrt(Real(2) / Real(-p.cc2));
  return p;
}

// e^{t^2} erfc(t) for large t via the asymptotic series; relative ~1e-13
// above the crossover used below
Real erfcx_large(Real t) {
  Real x2 = 1 / (2 * t * t);
  Real term = 1, series = 1;
  for (int n = 1; n <= 10; ++n) {
    term *= -Real(2 * n - 1) * x2;
    series += term;
  }
  return series / (t * std::sqrt(PI));
}

// sgn(w)/2 erfc(sqrt(pi v)|w|) e^{-2 pi m v} without overflow: for large
// arguments switch to the scaled form with exponent -pi v (w^2 + 2m), which
// is controlled by the positive-definite majorant norm
Real erfc_tail(int sg, Real w, Real m, Real v) {
  Real t = std::sqrt(PI * v) * std::abs(w);
  if (t <= 20) return Real(sg) / 2 * erfc(t) * std::exp(-2 * PI * m * v);
  return Real(sg) / 2 * erfcx_large(t) * std::exp(-PI * v * (w * w + 2 * m));
}

// position of the class along an isotropic line: the x mod 1 with
// x w = h mod Z^3 for w = c / gcd (direction preserved), if it exists
std::optional<Rational> line_position(const Vec3& c, const Vec3Q& h) {
  i64 g = 0;
  for (i64 t : c) g = gcd64(g, t);
  Vec3 w{c[0] / g, c[1] / g, c[2] / g};
  i64 den = 1;
  for (const Rational& hi : h) den = den / gcd64(den, hi.den) * hi.den;
  i64 wl = 1;
  for (i64 wi : w) {
    i64 a = wi < 0 ? -wi : wi;
    if (a != 0) wl = wl / gcd64(wl, a) * a;
  }
  i64 span = den * wl;
  for (i64 j = 0; j < span; ++j) {
    Rational x(j, span);
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i)
      ok = (x * Rational(w[size_t(i)]) - h[size_t(i)]).is_integer();
    if (ok) return x;
  }
  return std::nullopt;
}

}  // namespace

Cplx indefinite_theta(const Sig21Lattice& lat, const Vec3& c1, const Vec3& c2,
                      const Vec3Q& h, Cplx tau, i64 cutoff, i64* boundary_hits) {
  const Real u = tau.real(), v = tau.imag();
  if (!(v > 0)) throw std::domain_error("tau must lie in the upper half plane");
  if (cutoff < 1) throw std::domain_error("cutoff must be at least 1");
  const SidePrep p = prep_sides(lat, c1, c2, h);
  if (boundary_hits) *boundary_hits = 0;
  const Real den2 = Real(2 * p.den * p.den);
  Cplx acc(0, 0);
  std::array<i64, 3> Y{};
  for (i64 n0 = -cutoff; n0 <= cutoff; ++n0)
    for (i64 n1 = -cutoff; n1 <= cutoff; ++n1)
      for (i64 n2 = -cutoff; n2 <= cutoff; ++n2) {
        Y[0] = p.hs[0] + p.den * n0;
        Y[1] = p.hs[1] + p.den * n1;
        Y[2] = p.hs[2] + p.den * n2;
        i64 B = 0;
        for (int i = 0; i < 3; ++i) {
          i64 gy = 0;
          for (int j = 0; j < 3; ++j) gy += i64(lat.gram(i, j)) * Y[size_t(j)];
          B += Y[size_t(i)] * gy;
        }
        i64 P1 = Y[0] * p.gc1[0] + Y[1] * p.gc1[1] + Y[2] * p.gc1[2];
        i64 P2 = Y[0] * p.gc2[0] + Y[1] * p.gc2[1] + Y[2] * p.gc2[2];
        Real m = Real(B) / den2;
        Cplx phase = e_of(m * u);
        int s1 = sgn_i64(P1), s2 = sgn_i64(P2);
        if (B >= 0 && s1 != s2)
          acc += Real(s1 - s2) / 2 * std::exp(-2 * PI * m * v) * phase;
        if (boundary_hits && B > 0 && (P1 == 0 || P2 == 0)) ++*boundary_hits;
        // erfc tails of the point sides enter as [c2] minus [c1]
        if (p.cc1 < 0 && P1 != 0)
          acc += erfc_tail(s1, Real(P1) / Real(p.den) * p.scale1, m, v) * phase;
        if (p.cc2 < 0 && P2 != 0)
          acc -= erfc_tail(s2, Real(P2) / Real(p.den) * p.scale2, m, v) * phase;
      }
  // an isotropic side contributes its exact sawtooth constant at exponent zero
  if (p.cc2 == 0) {
    auto th = line_position(c2, h);
    if (th) acc += -B1(*th).to_real();
  }
  if (p.cc1 == 0) {
    auto th = line_position(c1, h);
    if (th) acc -= -B1(*th).to_real();
  }
  return acc;
}

Rational indefinite_theta_coeff(const Sig21Lattice& lat, const Vec3& c1,
                                const Vec3& c2, const Vec3Q& h,
                                const Rational& m, i64 cutoff) {
  if (cutoff < 1) throw std::domain_error("cutoff must be at least 1");
  const SidePrep p = prep_sides(lat, c1, c2, h);
  Rational target = m * Rational(2 * p.den * p.den);
  if (!target.is_integer() || target.num < 0) return Rational(0);
  const i64 B_target = target.num;
  Rational acc(0);
  std::array<i64, 3> Y{};
  for (i64 n0 = -cutoff; n0 <= cutoff; ++n0)
    for (i64 n1 = -cutoff; n1 <= cutoff; ++n1)
      for (i64 n2 = -cutoff; n2 <= cutoff; ++n2) {
        Y[0] = p.hs[0] + p.den * n0;
        Y[1] = p.hs[1] + p.den * n1;
        Y[2] = p.hs[2] + p.den * n2;
        i64 B = 0;
        for (int i = 0; i < 3; ++i) {
          i64 gy = 0;
          for (int j = 0; j < 3; ++j) gy += i64(lat.gram(i, j)) * Y[size_t(j)];
          B += Y[size_t(i)] * gy;
        }
        if (B != B_target) continue;
        i64 P1 = Y[0] * p.gc1[0] + Y[1] * p.gc1[1] + Y[2] * p.gc1[2];
        i64 P2 = Y[0] * p.gc2[0] + Y[1] * p.gc2[1] + Y[2] * p.gc2[2];
        int s1 = sgn_i64(P1), s2 = sgn_i64(P2);
        if (s1 != s2) acc += Rational(s1 - s2, 2);
      }
  return acc;
}

namespace {

// closed form of 1/(1 -+ q^k)^2: coefficients (j+1) (-+1)^j at exponent j k
IntSeries geom_square(int k, int order, bool alternate) {
  IntSeries r;
  r.m0 = 0;
  r.c.assign(size_t(order), 0);
  for (int j = 0; j * k < order; ++j)
    r.c[size_t(j * k)] = alternate && (j % 2 == 1) ? -(j + 1) : (j + 1);
  return r;
}

}  // namespace

IntSeries mock_theta_f(int n_terms, SumRoute route) {
  if (n_terms < 1) throw std::domain_error("series needs at least one term");
  IntSeries acc = IntSeries::monomial(1, 0, n_terms);
  if (route == SumRoute::division) {
    IntSeries prod = IntSeries::monomial(1, 0, n_terms);
    for (int n = 1; n * n < n_terms; ++n) {
      IntSeries onep = is_add(IntSeries::monomial(1, 0, n_terms),
                              IntSeries::monomial(1, n, n_terms));
      prod = is_mul(prod, is_mul(onep, onep));
      acc = is_add(acc, is_div_exact(IntSeries::monomial(1, n * n, n_terms), prod));
    }
    return acc;
  }
  for (int n = 1; n * n < n_terms; ++n) {
    IntSeries term = IntSeries::monomial(1, n * n, n_terms);
    for (int k = 1; k <= n; ++k) term = is_mul(term, geom_square(k, n_terms, true));
    acc = is_add(acc, term);
  }
  return acc;
}

IntSeries mock_theta_omega(int n_terms, SumRoute route) {
  if (n_terms < 1) throw std::domain_error("series needs at least one term");
  IntSeries acc = IntSeries::monomial(0, 0, n_terms);
  if (route == SumRoute::division) {
    IntSeries prod = IntSeries::monomial(1, 0, n_terms);
    for (int n = 0; 2 * n * n + 2 * n < n_terms; ++n) {
      IntSeries onem = is_sub(IntSeries::monomial(1, 0, n_terms),
                              IntSeries::monomial(1, 2 * n + 1, n_terms));
      prod = is_mul(prod, is_mul(onem, onem));
      acc = is_add(acc, is_div_exact(
                            IntSeries::monomial(1, 2 * n * n + 2 * n, n_terms), prod));
    }
    return acc;
  }
  for (int n = 0; 2 * n * n + 2 * n < n_terms; ++n) {
    IntSeries term = IntSeries::monomial(1, 2 * n * n + 2 * n, n_terms);
    for (int k = 1; k <= n + 1; ++k)
      term = is_mul(term, geom_square(2 * k - 1, n_terms, false));
    acc = is_add(acc, term);
  }
  return acc;
}

std::array<i64, 3> block_projection(const std::array<i64, 3>& mu) {
  const i64 a = mu[0], b = mu[1], c = mu[2];
  if (a < 0 || a >= 12 || b < 0 || b >= 4 || c < 0 || c >= 6)
    throw std::domain_error("class indices out of range");
  if (mod_pos(a, 2) != mod_pos(b, 2))
    throw std::domain_error("projection needs matching parity");
  return {mod_pos((a + b) / 2, 2), mod_pos((a + 3 * b) / 2, 6), mod_pos(c, 6)};
}

MockBlock mock_block(int n_terms) {
  if (n_terms < 24)
    throw std::domain_error("block needs at least one full integer exponent");
  const i64 E = n_terms;
  const int nf = int(E / 24) + 3;
  const int nw = int(E / 12) + 3;

  MockBlock blk;
  IntSeries f_int = mock_theta_f(nf);
  IntSeries w_int = mock_theta_omega(nw);

  GridSeries f0 = gs_rebase(gs_shift(gs_from_int(f_int), Rational(-1, 24)), 24);
  GridSeries w_half = gs_power_subst(gs_from_int(w_int), 1, 2);
  GridSeries w_half_m = gs_power_subst(gs_alternate(gs_from_int(w_int)), 1, 2);
  GridSeries f1 =
      gs_rebase(gs_scale(gs_shift(w_half, Rational(1, 3)), Rational(2)), 24);
  GridSeries f2 =
      gs_rebase(gs_scale(gs_shift(w_half_m, Rational(1, 3)), Rational(2)), 24);
  blk.f_vec = {f0, f1, f2};

  GridSeries zero24;
  zero24.den = 24;
  zero24.e0 = -1;
  zero24.c.assign(size_t(E + 8), Rational(0));

  const std::array<GridSeries, 12> entry = {
      zero24,
      f0,
      gs_sub(f2, f1),
      zero24,
      gs_scale(gs_add(f1, f2), Rational(-1)),
      gs_scale(f0, Rational(-1)),
      zero24,
      f0,
      gs_add(f1, f2),
      zero24,
      gs_sub(f1, f2),
      gs_scale(f0, Rational(-1))};
  for (int j = 0; j < 12; ++j)
    blk.completion[size_t(j)] = gs_scale(entry[size_t(j)], Rational(-1, 4));

  const i64 grid_end = E + 8;
  auto fresh = [&]() {
    GridSeries t;
    t.den = 24;
    t.e0 = 0;
    t.c.assign(size_t(grid_end), Rational(0));
    return t;
  };
  const i64 nlim = isqrt64(grid_end) + 2;
  for (i64 a = 0; a < 12; ++a) {
    GridSeries t = fresh();
    for (i64 n = -nlim; n <= nlim; ++n) {
      i64 r = 12 * n + a;
      i64 idx = r * r;  // exponent (12n+a)^2 / 24
      if (idx < grid_end) t.c[size_t(idx)] += Rational(r, 12);
    }
    blk.odd_theta[size_t(a)] = t;
  }
  for (i64 b = 0; b < 4; ++b) {
    GridSeries t = fresh();
    for (i64 n = -nlim; n <= nlim; ++n) {
      i64 r = 4 * n + b;
      i64 idx = 3 * r * r;  // exponent 2 x^2 = 3 (4n+b)^2 / 24
      if (idx < grid_end) t.c[size_t(idx)] += Rational(1);
    }
    blk.even_theta_8[size_t(b)] = t;
  }
  for (i64 c = 0; c < 6; ++c) {
    GridSeries t = fresh();
    for (i64 n = -nlim; n <= nlim; ++n) {
      i64 r = 6 * n + c;
      i64 idx = 2 * r * r;  // exponent 3 x^2 = 2 (6n+c)^2 / 24
      if (idx < grid_end) t.c[size_t(idx)] += Rational(1);
    }
    blk.even_theta_12[size_t(c)] = t;
  }

  blk.classes.reserve(72);
  for (i64 h0 = 0; h0 < 2; ++h0)
    for (i64 h1 = 0; h1 < 6; ++h1)
      for (i64 h2 = 0; h2 < 6; ++h2) blk.classes.push_back({h0, h1, h2});
  blk.fibers.assign(72, {});
  for (i64 a = 0; a < 12; ++a)
    for (i64 b = 0; b < 4; ++b) {
      if (mod_pos(a, 2) != mod_pos(b, 2)) continue;
      for (i64 c = 0; c < 6; ++c) {
        auto t = block_projection({a, b, c});
        blk.fibers[size_t(t[0] * 36 + t[1] * 6 + t[2])].push_back({a, b, c});
      }
    }

  blk.combination.reserve(72);
  blk.min_exponent.reserve(72);
  for (size_t idx = 0; idx < 72; ++idx) {
    GridSeries sum = zero24;
    for (const auto& mu : blk.fibers[idx]) {
      GridSeries part =
          gs_mul(gs_mul(blk.completion[size_t(mu[0])],
                        blk.even_theta_8[size_t(mu[1])]),
                 blk.even_theta_12[size_t(mu[2])]);
      sum = gs_add(sum, part);
    }
    blk.combination.push_back(sum);
    if (sum.is_zero())
      blk.min_exponent.push_back(std::nullopt);
    else
      blk.min_exponent.push_back(sum.min_exponent());
  }
  return blk;
}

}  // namespace wind
