#include "wind/hyperbolic.hpp"

#include <algorithm>
#include <cmath>

namespace wind {

namespace {

i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  if (b == 0) {
    x = (a >= 0) ? 1 : -1;
    y = 0;
    return std::abs(a);
  }
  i64 x1, y1;
  i64 g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

Mat2 t_power(i64 m) { return {1, m, 0, 1}; }

}  // namespace

std::string CuspPoint::str() const {
  if (q == 0) return "oo";
  if (q == 1) return std::to_string(p);
  return std::to_string(p) + "/" + std::to_string(q);
}

CuspPoint normalize_cusp(i64 p, i64 q) {
  if (p == 0 && q == 0) throw std::domain_error("zero vector is not a boundary point");
  i64 g = gcd64(p, q);
  p /= g;
  q /= g;
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  return {p, q};
}

Mat2 cusp_section(const CuspPoint& l) {
  i64 x, y;
  if (ext_gcd(l.p, l.q, x, y) != 1) throw std::domain_error("boundary point is not primitive");
  Mat2 g{l.p, -y, l.q, x};
  if (g.det() != 1) throw std::runtime_error("section construction failed");
  return g;
}

GeodesicArc geodesic(const QuadForm& f) {
  i64 D = discriminant(f);
  if (D <= 0) throw std::domain_error("geodesic requires positive discriminant");
  GeodesicArc arc;
  arc.form = f;
  i64 k = 0;
  arc.split = is_square(D, &k);
  if (f.a != 0) {
    arc.vertical = false;
    arc.center = Rational::make(-f.b, 2 * f.a);
    arc.radius = std::sqrt(Real(D)) / Real(2 * std::abs(f.a));
    arc.orientation = (f.a > 0) ? 1 : -1;
    arc.base_point = Cplx(arc.center.to_real(), arc.radius);
    if (arc.split) {
      arc.end_to = normalize_cusp(-f.b + k, 2 * f.a);
      arc.end_from = normalize_cusp(-f.b - k, 2 * f.a);
    }
  } else {
    // a = 0 forces D = b^2, a split vertical line
    arc.vertical = true;
    arc.center = Rational::make(-f.c, f.b);
    arc.radius = 0;
    arc.orientation = (f.b < 0) ? 1 : -1;  // +1: oriented upward, into infinity
    arc.base_point = Cplx(arc.center.to_real(), 1);
    if (f.b < 0) {
      arc.end_to = CuspPoint{1, 0};
      arc.end_from = normalize_cusp(-f.c, f.b);
    } else {
      arc.end_to = normalize_cusp(-f.c, f.b);
      arc.end_from = CuspPoint{1, 0};
    }
  }
  if (!arc.split) arc.stabilizer = automorph(f, f.n);
  return arc;
}

Real dpar(const QuadForm& f, Cplx z) {
  if (!(z.imag() > 0)) throw std::domain_error("point must lie in the upper half-plane");
  Real x = z.real(), y = z.imag();
  return (Real(f.a) * (x * x + y * y) + Real(f.b) * x + Real(f.c)) / y;
}

std::pair<Cplx, Mat2> reduce_to_F(Cplx z) {
  if (!(z.imag() > 0)) throw std::domain_error("point must lie in the upper half-plane");
  if (z.imag() < 1e-12) throw precision_error("point too close to the boundary to reduce");
  Mat2 g = m_id();
  for (int guard = 0; guard < 10000; ++guard) {
    Real m = std::nearbyint(z.real());
    if (m != 0) {
      if (std::abs(m) > Real(1e15)) throw precision_error("translation amount overflows");
      Mat2 t = t_power(-i64(m));
      z -= m;
      g = m_mul(t, g);
    }
    if (std::norm(z) < 1 - 1e-15) {
      z = -Real(1) / z;
      g = m_mul(m_S(), g);
    } else {
      return {z, g};
    }
  }
  throw precision_error("fundamental domain reduction did not converge");
}

CuspData cusp_data_for(const CuspPoint& l, i64 N) {
  if (N < 1) throw std::domain_error("level must be positive");
  CuspData d;
  d.line = l;
  d.sigma = cusp_section(l);
  i64 p = l.p, q = l.q;
  d.width = N / gcd64(q * q, N);
  i64 g1 = gcd64(gcd64(q * q, std::abs(p * q)), N * p * p);
  d.beta = Rational::make(1, g1);
  d.eps = Rational::make(d.width, 1) / d.beta;
  // lattice points along the line have second coordinate 2Npq t on the
  // (A, B, C) grid; t runs over (1/g2) Z
  i64 g2 = gcd64(gcd64(q * q, N * p * p), 2 * N * std::abs(p * q));
  i64 step = (g2 == 0) ? 0 : (2 * N * p * q) / g2;
  for (i64 h = 0; h < 2 * N; ++h) {
    bool found = false;
    i64 s_hit = 0;
    for (i64 s = 0; s <= 2 * N && !found; ++s) {
      if (mod_pos(step * s - h, 2 * N) == 0) {
        found = true;
        s_hit = s;
      }
    }
    if (!found) continue;
    Rational t = Rational::make(s_hit, g2);
    Rational off = t - d.beta * Rational::make((t / d.beta).floor(), 1);
    d.h_offsets[h] = off;
  }
  return d;
}

std::optional<Mat2> cusp_transporter(const CuspPoint& a, const CuspPoint& b, i64 N) {
  // want gamma in the level group with gamma a = b: gamma = s_b T^m s_a^{-1}
  Mat2 sa = cusp_section(a), sb = cusp_section(b);
  Mat2 sa_inv = m_inv(sa);
  for (i64 m = 0; m < N; ++m) {
    Mat2 cand = m_mul(m_mul(sb, t_power(m)), sa_inv);
    if (mod_pos(cand.c, N) == 0) return cand;
  }
  return std::nullopt;
}

std::vector<CuspData> cusp_classes(i64 N) {
  if (N < 1) throw std::domain_error("level must be positive");
  auto cosets = gamma0N_coset_reps(N);
  std::vector<CuspPoint> points;
  for (const auto& gj : cosets) {
    Mat2 inv = m_inv(gj);
    CuspPoint l = normalize_cusp(inv.a, inv.c);
    // canonical representative: slide p into [0, q) by integer translations
    if (l.q > 0) l.p = mod_pos(l.p, l.q);
    bool known = false;
    for (const auto& seen : points)
      if (cusp_transporter(l, seen, N).has_value()) {
        known = true;
        break;
      }
    if (!known) points.push_back(l);
  }
  std::sort(points.begin(), points.end(), [](const CuspPoint& x, const CuspPoint& y) {
    if ((x.q == 0) != (y.q == 0)) return x.q == 0;  // infinity first
    if (x.q != y.q) return x.q < y.q;
    return x.p < y.p;
  });
  std::vector<CuspData> out;
  for (const auto& l : points) out.push_back(cusp_data_for(l, N));
  return out;
}

std::pair<Rational, Mat2> split_real_part(const QuadForm& f) {
  i64 D = discriminant(f);
  i64 k = 0;
  if (D <= 0 || !is_square(D, &k)) throw std::domain_error("form is not split-hyperbolic");
  i64 N = f.n;
  GeodesicArc arc = geodesic(f);
  // section through the oriented endpoint, pinned to the class section
  auto classes = cusp_classes(N);
  const CuspData* cls = nullptr;
  Mat2 gamma;
  for (const auto& c : classes) {
    auto t = cusp_transporter(c.line, arc.end_to, N);
    if (t.has_value()) {
      cls = &c;
      gamma = *t;
      break;
    }
  }
  if (!cls) throw std::runtime_error("endpoint matched no cusp class");
  Mat2 sigma = m_mul(gamma, cls->sigma);
  QuadForm nf = gamma0N_action(sigma, QuadForm{f.a, f.b, f.c, 1});
  if (nf.a != 0 || nf.b != -k)
    throw std::runtime_error("section did not normalize the split form");
  Rational r = Rational::make(nf.c, k);
  // slide by multiples of the width into [-width/2, width/2)
  Rational w = Rational::make(cls->width, 1);
  Rational shifted = (r + w / Rational::make(2, 1)) / w;
  i64 M = shifted.floor();
  r = r - w * Rational::make(M, 1);
  sigma = m_mul(sigma, t_power(M * cls->width));
  return {r, sigma};
}

}  // namespace wind
