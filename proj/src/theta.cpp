#include "wind/theta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wind {

namespace {

constexpr Real kSeriesCut = 1.0;  // erfc algorithm crossover
// table terms are kept while erfc(a sqrt(v)) / Gaussian factors can exceed
// ~1e-15 for any v >= kVMin
constexpr Real kVMin = 0.4;
constexpr Real kArgCut = 5.8;

Real erfc_series(Real t) {
  // erf(t) = (2/sqrt(pi)) sum (-1)^n t^(2n+1) / (n! (2n+1))
  Real term = t, sum = t;
  for (int n = 1; n < 200; ++n) {
    term *= -t * t / n;
    Real inc = term / (2 * n + 1);
    sum += inc;
    if (std::abs(inc) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return 1 - sum * 2 / std::sqrt(PI);
}

Real erfc_cf(Real t) {
  // erfc(t) = e^{-t^2}/(sqrt(pi) F), F = t + (1/2)/(t + 1/(t + (3/2)/(...)))
  const Real tiny = 1e-300;
  Real f = t, c = t, d = 0;
  for (int j = 1; j < 600; ++j) {
    Real aj = Real(j) / 2;
    d = t + aj * d;
    if (std::abs(d) < tiny) d = tiny;
    d = 1 / d;
    c = t + aj / c;
    if (std::abs(c) < tiny) c = tiny;
    Real delta = c * d;
    f *= delta;
    if (std::abs(delta - 1) < 1e-16) break;
  }
  return std::exp(-t * t) / (std::sqrt(PI) * f);
}

// transport by an arbitrary unimodular matrix, ignoring the level tag
QuadForm subst_any(const Mat2& g, const QuadForm& f) {
  QuadForm t{f.a, f.b, f.c, 1};
  QuadForm r = gamma0N_action(g, t);
  return {r.a, r.b, r.c, f.n};
}

i64 level_of(const DiscriminantForm& dform) {
  if (dform.mods.size() != 1 || dform.mods[0] % 2 != 0)
    throw std::domain_error("unary theta needs the cyclic level module");
  return dform.mods[0] / 2;
}

// primitive generator of the lattice line of the cusp, stored coordinates
QuadForm line_generator(const CuspPoint& l, i64 N) {
  i64 p = l.p, q = l.q;
  QuadForm u{-N * q * q, 2 * N * p * q, -N * p * p, N};
  i64 g1 = gcd64(gcd64(q * q, std::abs(p * q)), N * p * p);
  return {u.a / g1, u.b / g1, u.c / g1, N};
}

struct CuspFrame {
  i64 c0 = 1;        // |C| of the transported line generator, = N beta
  i64 lambda = 0;    // class map h = lambda B' + mu C' mod 2N
  i64 mu = 0;
};

CuspFrame cusp_frame(const CuspData& cusp, i64 N) {
  CuspFrame fr;
  QuadForm w = line_generator(cusp.line, N);
  QuadForm tw = subst_any(cusp.sigma, w);
  if (tw.a != 0 || tw.b != 0 || tw.c == 0)
    throw std::runtime_error("line generator did not transport to the vertical");
  fr.c0 = std::abs(tw.c);
  Mat2 back = m_inv(cusp.sigma);
  fr.lambda = subst_any(back, {0, 1, 0, N}).b;
  fr.mu = subst_any(back, {0, 0, 1, N}).b;
  return fr;
}

// membership test for the transported vector [0, B', C']: the original
// stored triple must have first coefficient divisible by N
bool in_level_lattice(const Mat2& back, i64 bp, i64 cp, i64 N) {
  QuadForm orig = subst_any(back, {0, bp, cp, N});
  return mod_pos(orig.a, N) == 0;
}

// census entries are integer multiples of one irrational unit; accumulating
// the multiplicities keeps cancellations exact
VVSeries emit_census(i64 N, const std::map<std::pair<i64, i64>, i64>& mult,
                     Real unit) {
  VVSeries out(N);
  for (const auto& [key, m] : mult) {
    if (m == 0) continue;
    CoeffFn c;
    c.constant = Cplx(m * unit, 0);
    out.add(key.first, key.second, c);
  }
  return out;
}

i64 isqrt_exact(i64 n) {
  i64 r = isqrt64(n);
  return (r * r == n) ? r : -1;
}

GenusCharContext context_for(i64 delta, i64 r, i64 N) {
  return make_genus_context(delta, r, N);
}

void check_table_args(i64 delta, i64 N) {
  if (N != 1)
    throw std::domain_error("coefficient tables are implemented for level one");
  if (delta >= 0 || !is_fundamental_discriminant(delta))
    throw std::domain_error("twist must be a negative fundamental discriminant");
}

// forms of discriminant disc with A+C = s, enumerated as (s, B, t = A-C)
template <typename F>
void for_fixed_trace(i64 disc, i64 s, F&& fn) {
  i64 bb_max = disc + s * s;
  if (bb_max < 0) return;
  i64 bmax = isqrt64(bb_max);
  for (i64 B = -bmax; B <= bmax; ++B) {
    i64 t2 = disc + s * s - B * B;
    if (t2 < 0) continue;
    i64 t = isqrt_exact(t2);
    if (t < 0) continue;
    if (mod_pos(s + t, 2) != 0) continue;
    fn(QuadForm{(s + t) / 2, B, (s - t) / 2, 1});
    if (t > 0) fn(QuadForm{(s - t) / 2, B, (s + t) / 2, 1});
  }
}

}  // namespace

Real erfc(Real t) {
  if (std::isnan(t)) throw std::domain_error("erfc of NaN");
  if (t < 0) return 2 - erfc(-t);
  if (t < kSeriesCut) return erfc_series(t);
  if (t > 27) return 0;  // below 1e-300
  return erfc_cf(t);
}

Rational B1(const Rational& x) {
  i64 fl = x.floor();
  i64 ce = x.is_integer() ? fl : fl + 1;
  return x - Rational::make(i128(fl) + ce, 2);
}

Real B1(Real x) {
  Real fl = std::floor(x), ce = std::ceil(x);
  return x - (fl + ce) / 2;
}

Real g_fun(Real w, Real kappa, const Rational& s) {
  if (!(kappa > 0)) throw std::domain_error("kernel parameter must be positive");
  if (w == Real(0)) throw std::domain_error("kernel undefined at w = 0");
  if (s == Rational(0)) {
    Real sgn = w > 0 ? 1 : -1;
    return sgn / 2 * erfc(std::sqrt(PI * kappa) * std::abs(w));
  }
  if (s == Rational::make(1, 2)) return std::exp(-PI * w * w * kappa) / (2 * PI * w);
  throw std::domain_error("only s = 0 and s = 1/2 are supported");
}

Real periodic_G(Real x, Real kappa, GSide side) {
  if (!(kappa > 0)) throw std::domain_error("kernel parameter must be positive");
  if (std::abs(x - std::nearbyint(x)) < 1e-12)
    throw std::domain_error("periodization is evaluated away from integers");
  if (side == GSide::direct) {
    Real n_real = std::sqrt(40 / (PI * kappa)) + 2;
    if (n_real > 2e7) throw precision_error("direct tail bound unachievable");
    i64 n_max = i64(n_real);
    i64 n0 = llround(-x);
    Real sum = 0;
    for (i64 n = n0 - n_max; n <= n0 + n_max; ++n)
      sum += g_fun(x + n, kappa, Rational(0));
    return sum;
  }
  Real m_real = std::sqrt(40 * kappa / PI) + 2;
  if (m_real > 2e7) throw precision_error("fourier tail bound unachievable");
  i64 m_max = i64(m_real);
  Cplx acc(0, 0);
  for (i64 m = 1; m <= m_max; ++m) {
    Real gm = g_fun(Real(m), 1 / kappa, Rational::make(1, 2));
    acc += gm * (e_of(m * x) - e_of(-m * x));
  }
  Cplx total = Cplx(-B1(x), 0) + Cplx(0, 1) * acc;
  if (std::abs(total.imag()) > 1e-12)
    throw precision_error("fourier side failed the reality check");
  return total.real();
}

VVSeries unary_theta_ell(const CuspData& cusp, const DiscriminantForm& dform,
                         i64 d_max) {
  i64 N = level_of(dform);
  CuspFrame fr = cusp_frame(cusp, N);
  Mat2 back = m_inv(cusp.sigma);
  i64 alpha = cusp.width;
  // -sqrt(N)/(2 eps) = -sqrt(N) beta / (2 width)
  Real orbit_weight = std::sqrt(Real(N)) * cusp.beta.to_real() / (2 * alpha);
  std::map<std::pair<i64, i64>, i64> mult;
  for (i64 k = 1; k * k <= d_max; ++k) {
    for (int sign_bp : {1, -1}) {
      i64 bp = sign_bp * k;
      i64 delta_sign = bp < 0 ? 1 : -1;  // +1 when the line is the head end
      for (i64 cp = 0; cp < k * alpha; ++cp) {
        if (!in_level_lattice(back, bp, cp, N)) continue;
        i64 h = mod_pos(fr.lambda * bp + fr.mu * cp, 2 * N);
        if (mod_pos(k * k - h * h, 4 * N) != 0)
          throw std::runtime_error("exponent class mismatch in orbit census");
        mult[{h, k * k}] -= delta_sign;
      }
    }
  }
  return emit_census(N, mult, orbit_weight);
}

VVSeries unary_theta_ell_window(const CuspData& cusp,
                                const DiscriminantForm& dform, i64 d_max) {
  i64 N = level_of(dform);
  CuspFrame fr = cusp_frame(cusp, N);
  Mat2 back = m_inv(cusp.sigma);
  Real pairing_unit = 1 / (2 * std::sqrt(Real(N)));
  std::map<std::pair<i64, i64>, i64> mult;
  for (i64 k = 1; k * k <= d_max; ++k) {
    for (int sign_bp : {1, -1}) {
      i64 bp = sign_bp * k;
      for (i64 cp = 0; cp < fr.c0; ++cp) {
        if (!in_level_lattice(back, bp, cp, N)) continue;
        i64 h = mod_pos(fr.lambda * bp + fr.mu * cp, 2 * N);
        mult[{h, k * k}] += bp;
      }
    }
  }
  return emit_census(N, mult, pairing_unit);
}

VVVector vvseries_eval(const VVSeries& s, Cplx tau) {
  if (!(tau.imag() > 0)) throw std::domain_error("tau must lie in the upper half-plane");
  VVVector out = VVVector::Zero(2 * s.n);
  for (i64 h = 0; h < i64(s.comps.size()); ++h)
    for (const auto& [d, cf] : s.comps[h]) {
      Cplx expo = Cplx(0, 2 * PI) * (Real(d) / (4 * s.n)) * tau;
      out[h] += cf.eval(tau.imag()) * std::exp(expo);
    }
  return out;
}

Cplx siegel_theta_Delta(i64 delta, Cplx tau, i64 cutoff) {
  if (delta >= 0 || !is_fundamental_discriminant(delta))
    throw std::domain_error("twist must be a negative fundamental discriminant");
  if (!(tau.imag() > 0)) throw std::domain_error("tau must lie in the upper half-plane");
  if (cutoff < 1) throw std::domain_error("cutoff must be positive");
  i64 ad = -delta;
  GenusCharContext ctx = context_for(delta, ad % 2 ? 1 : 0, 1);
  Real u = tau.real(), v = tau.imag();
  Cplx sum(0, 0);
  for (i64 A = -cutoff; A <= cutoff; ++A)
    for (i64 B = -cutoff; B <= cutoff; ++B)
      for (i64 C = -cutoff; C <= cutoff; ++C) {
        i64 D = B * B - 4 * A * C;
        if (D <= 0 || mod_pos(D, ad) != 0) continue;
        int chi = genus_character(ctx, {A, B, C, 1});
        if (chi == 0) continue;
        // |q^{-D/ad}| e^{-4 pi v (B^2+(A-C)^2)/ad}
        //   = e^{-2 pi v (B^2+(A-C)^2+(A+C)^2)/ad}
        Real re = -2 * PI * v * (Real(B) * B + Real(A - C) * (A - C) + Real(A + C) * (A + C)) / ad;
        Real im = -2 * PI * u * Real(D) / ad;
        sum += Real(chi) * Real(A + C) * std::exp(Cplx(re, im));
      }
  return sum / std::sqrt(Real(ad));
}

namespace {

// shared enumeration of the completion/lowered tables; emit(d, s, chi) is
// called once per form of discriminant |delta| d with trace s = A + C != 0
template <typename F>
void scan_tables(i64 delta, i64 r, i64 d_max, F&& emit) {
  i64 ad = -delta;
  GenusCharContext ctx = context_for(delta, r, 1);
  i64 R = i64(std::ceil(kArgCut / std::sqrt(kVMin * 4 * PI / ad))) + 2;
  for (i64 d = 1; d <= d_max; ++d) {
    i64 disc = ad * d;
    if (mod_pos(disc, 4) == 2 || mod_pos(disc, 4) == 3) continue;
    for (i64 s = -R; s <= R; ++s) {
      if (s == 0) continue;  // sgn(0) = 0: the term is dropped, not an error
      for_fixed_trace(disc, s, [&](const QuadForm& f) {
        int chi = genus_character(ctx, f);
        if (chi != 0) emit(d, s, chi);
      });
    }
  }
}

Rational cusp_constant(i64 delta, i64 N, const GenusCharContext& ctx, int eta_sign) {
  i64 ad = -delta;
  Rational total(0);
  for (const CuspData& cu : cusp_classes(N)) {
    // the interior point carries +eta_sign, the cusp class the opposite
    Rational r_cusp(-eta_sign);
    QuadForm w = line_generator(cu.line, N);
    i64 aw = w.a / N, bw = w.b, cw = w.c;
    i64 k0 = gcd64(gcd64(std::abs(aw), std::abs(bw)), std::abs(cw));
    i64 a0 = aw / k0, b0 = bw / k0, c0 = cw / k0;  // generator of the line in L'
    for (i64 j = 0; j < ad * k0; ++j) {
      QuadForm rep{N * mod_pos(j * a0, ad), mod_pos(j * b0, 2 * N * ad),
                   mod_pos(j * c0, ad), N};
      int chi = genus_character(ctx, rep);
      if (chi == 0) continue;
      total = total + r_cusp * Rational(chi) * B1(Rational::make(j, ad * k0));
    }
  }
  return total;
}

}  // namespace

ThetaTable theta_star(i64 delta, i64 r, i64 N, const ThirdKindForm& eta,
                      i64 d_max) {
  check_table_args(delta, N);
  i64 ad = -delta;
  ThetaTable tab{delta, r, N, eta.sign, {}, Rational(0)};
  std::map<i64, std::map<i64, Real>> amp;  // d -> |s| -> erfc amplitude
  scan_tables(delta, r, d_max, [&](i64 d, i64 s, int chi) {
    amp[d][std::abs(s)] += Real(eta.sign) * chi * (s > 0 ? 1 : -1);
  });
  for (const auto& [d, by_abs] : amp) {
    CoeffFn c;
    for (const auto& [abs_s, a] : by_abs) {
      if (a == Real(0)) continue;
      c.erfcs.push_back({Cplx(a, 0), std::sqrt(4 * PI / ad) * abs_s});
    }
    if (!c.trivial()) tab.terms[d] = c;
  }
  tab.constant = cusp_constant(delta, N, context_for(delta, r, N), eta.sign);
  return tab;
}

ThetaTable theta_lower(i64 delta, i64 r, i64 N, const ThirdKindForm& eta,
                       i64 d_max) {
  check_table_args(delta, N);
  i64 ad = -delta;
  ThetaTable tab{delta, r, N, eta.sign, {}, Rational(0)};
  std::map<i64, std::map<i64, Real>> amp;  // d -> |s| -> Gaussian amplitude
  scan_tables(delta, r, d_max, [&](i64 d, i64 s, int chi) {
    amp[d][std::abs(s)] += -Real(eta.sign) * chi * s / std::sqrt(Real(ad));
  });
  for (const auto& [d, by_abs] : amp) {
    CoeffFn c;
    for (const auto& [abs_s, g] : by_abs) {
      if (g == Real(0)) continue;
      c.gauss.push_back({Cplx(g, 0), 4 * PI * abs_s * abs_s / ad});
    }
    if (!c.trivial()) tab.terms[d] = c;
  }
  return tab;
}

Cplx table_eval(const ThetaTable& t, Cplx tau) {
  if (!(tau.imag() > 0)) throw std::domain_error("tau must lie in the upper half-plane");
  Cplx sum(t.constant.to_real(), 0);
  for (const auto& [d, cf] : t.terms)
    sum += cf.eval(tau.imag()) * std::exp(Cplx(0, 2 * PI) * Real(d) * tau);
  return sum;
}

CoeffFn lower_coeff_fn(const CoeffFn& c) {
  if (!c.gauss.empty())
    throw std::domain_error("Gaussian terms are already lowered images");
  CoeffFn out;
  for (const auto& e : c.erfcs)
    out.gauss.push_back({-e.s * e.a / (2 * std::sqrt(PI)), e.a * e.a});
  return out;
}

Real psi_tilde(const QuadForm& f, Cplx z, Real v) {
  if (!(z.imag() > 0)) throw std::domain_error("point must lie in the upper half-plane");
  if (!(v > 0)) throw std::domain_error("modulus parameter must be positive");
  Real val = dpar(f, z) / std::sqrt(Real(f.n));
  if (val == Real(0)) return 0;
  Real sgn = val > 0 ? 1 : -1;
  return -sgn / 2 * erfc(std::sqrt(PI * v) * std::abs(val));
}

Real psi_orbit_sum(const QuadForm& f, i64 N, Cplx z, Real v, Real R) {
  if (!(z.imag() > 0)) throw std::domain_error("point must lie in the upper half-plane");
  i64 D = discriminant(f);
  if (D <= 0) throw std::domain_error("orbit sums need positive discriminant");
  Real x0 = z.real(), y0 = z.imag();
  Real sum = 0;
  i64 amax = i64((R + std::sqrt(R * R + D)) / (2 * y0)) + 1;
  auto consider = [&](QuadForm g) {
    g.n = N;
    if (std::abs(dpar(g, z)) > R) return;
    if (!gamma0N_equivalent(g, f, N)) return;
    sum += psi_tilde(g, z, v);
  };
  for (i64 a = -amax; a <= amax; ++a) {
    if (a == 0) continue;
    if (mod_pos(a, N) != 0) continue;
    Real u2 = Real(D) - 4 * Real(a) * a * y0 * y0 + 4 * std::abs(Real(a)) * R * y0;
    if (u2 < 0) continue;
    Real uu = std::sqrt(u2);
    i64 blo = i64(std::ceil(-uu - 2 * a * x0)), bhi = i64(std::floor(uu - 2 * a * x0));
    for (i64 b = blo; b <= bhi; ++b) {
      if (mod_pos(b * b - D, 4 * std::abs(a)) != 0) continue;
      consider({a, b, (b * b - D) / (4 * a), N});
    }
  }
  i64 k = isqrt_exact(D);
  if (k > 0) {
    for (i64 b : {k, -k}) {
      i64 clo = i64(std::ceil(-R * y0 - b * x0)), chi = i64(std::floor(R * y0 - b * x0));
      for (i64 c = clo; c <= chi; ++c) consider({0, b, c, N});
    }
  }
  return sum;
}

}  // namespace wind
