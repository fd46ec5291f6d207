#include "wind/cycles.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <stdexcept>

#include "wind/arith.hpp"
#include "wind/hyperbolic.hpp"
#include "wind/modfun.hpp"
#include "wind/qforms.hpp"

namespace wind {

namespace {

constexpr Real kDetourRadius = 1e-3;  // detour circle radius around a pole
constexpr Real kPointTol = 1e-12;     // per-point tolerance of form evaluation
constexpr int kTrackDepth = 48;       // argument-tracking subdivision cap

// ---------------------------------------------------------------- quadrature

// 15-point Kronrod extension of 7-point Gauss on [-1, 1]
constexpr Real kKx[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr Real kKw[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr Real kGw[7] = {0.129484966168870, 0.279705391489277,
                         0.381830050505119, 0.417959183673469,
                         0.381830050505119, 0.279705391489277,
                         0.129484966168870};

using Integrand = std::function<Cplx(Real)>;

std::pair<Cplx, Real> gk15(const Integrand& f, Real a, Real b) {
  const Real mid = (a + b) / 2, half = (b - a) / 2;
  Cplx acc_k = 0, acc_g = 0;
  for (int i = 0; i < 15; ++i) {
    Cplx v = f(mid + half * kKx[i]);
    acc_k += kKw[i] * v;
    if (i % 2 == 1) acc_g += kGw[i / 2] * v;
  }
  acc_k *= half;
  acc_g *= half;
  return {acc_k, std::abs(acc_k - acc_g)};
}

// globally adaptive refinement: always split the subinterval with the worst
// error estimate; subintervals whose estimate has reached the roundoff floor
// are frozen so steep detour junctions cannot starve the budget
Cplx global_adaptive(const Integrand& f, Real a, Real b, Real tol) {
  struct Piece {
    Real err;
    Real a, b;
    Cplx val;
  };
  auto cmp = [](const Piece& x, const Piece& y) { return x.err < y.err; };
  std::priority_queue<Piece, std::vector<Piece>, decltype(cmp)> heap(cmp);
  Cplx sum_frozen(0, 0), sum_live(0, 0);
  Real err_frozen = 0, err_live = 0;
  auto push = [&](Real x, Real y) {
    auto [v, e] = gk15(f, x, y);
    heap.push({e, x, y, v});
    sum_live += v;
    err_live += e;
  };
  push(a, b);
  int evals = 1;
  while (err_frozen + std::max(err_live, 0.0) > tol) {
    if (heap.empty() || evals > 60000)
      throw precision_error("path quadrature did not converge");
    Piece p = heap.top();
    heap.pop();
    sum_live -= p.val;
    err_live -= p.err;
    if (p.b - p.a < 2e-13 || p.err <= 1e-15 * (1 + std::abs(p.val))) {
      sum_frozen += p.val;
      err_frozen += p.err;
      if (err_frozen > tol)
        throw precision_error("path quadrature stuck at the roundoff floor");
      continue;
    }
    Real mid = (p.a + p.b) / 2;
    push(p.a, mid);
    push(mid, p.b);
    evals += 2;
  }
  return sum_frozen + sum_live;
}

// signed integral: supports travel in either parameter direction
Cplx path_int(const Integrand& f, Real a, Real b, Real tol) {
  if (a == b) return Cplx(0, 0);
  if (a < b) return global_adaptive(f, a, b, tol);
  return -global_adaptive(f, b, a, tol);
}

// ---------------------------------------------------------- paths and poles

// parametrized path with the pole crossings already resolved into straight
// pieces separated by detour circles
struct DetourSpec {
  Cplx zeta;          // pole
  Real phi_in = 0;    // entry angle on the detour circle
  Real dccw = 0;      // positive angle to the exit, counterclockwise
};

struct BuiltPath {
  std::function<Cplx(Real)> z;
  std::function<Cplx(Real)> dz;
  std::vector<std::pair<Real, Real>> segs;  // in travel order
  std::vector<DetourSpec> detours;          // between consecutive segs
};

struct PoleSite {
  i64 m = 0, n = 1;  // pole (m + i)/n on the orbit of i
  Real t = 0;        // path parameter of the crossing
  Cplx zeta;
};

// points of the orbit of i lying on the circle geodesic of f, with circle
// angle in the closed range [t_lo, t_hi]; the points at height 1/n are
// (m + i)/n with m^2 = -1 mod n, and membership on the geodesic is the
// integer equation A m^2 + B n m + (A + C n^2) = 0
std::vector<PoleSite> poles_on_circle(const QuadForm& f, Real cx, Real R,
                                      Real t_lo, Real t_hi) {
  std::vector<PoleSite> out;
  Real y_min = R * std::min(std::sin(t_lo), std::sin(t_hi));
  if (y_min <= 0) throw std::domain_error("arc range must stay off the axis");
  i64 n_max = (i64)std::floor(1.0 / y_min) + 1;
  for (i64 n = 1; n <= n_max; ++n) {
    i64 disc = n * n * discriminant(f) - 4 * f.a * f.a;
    if (disc < 0) continue;
    i64 s = isqrt64(disc);
    if (s * s != disc) continue;
    for (int pm = 0; pm < (s == 0 ? 1 : 2); ++pm) {
      i64 num = -f.b * n + (pm == 0 ? s : -s);
      if (num % (2 * f.a) != 0) continue;
      i64 m = num / (2 * f.a);
      if (mod_pos(m * m + 1, n) != 0) continue;
      Cplx zeta(Real(m) / Real(n), 1.0 / Real(n));
      Real t = std::atan2(zeta.imag(), zeta.real() - cx);
      if (t < t_lo - 1e-12 || t > t_hi + 1e-12) continue;
      out.push_back({m, n, t, zeta});
    }
  }
  return out;
}

// orbit-of-i points on the vertical line Re z = r with height in [y_lo, y_hi]
std::vector<PoleSite> poles_on_vline(const Rational& r, Real y_lo, Real y_hi) {
  std::vector<PoleSite> out;
  for (i64 k = 1;; ++k) {
    i64 n = r.den * k;
    if (n > (i64)std::floor(1.0 / y_lo) + 1) break;
    Real y = 1.0 / Real(n);
    if (y < y_lo - 1e-12 || y > y_hi + 1e-12) continue;
    i64 m = r.num * k;
    if (mod_pos(m * m + 1, n) != 0) continue;
    Cplx zeta(r.to_real(), y);
    out.push_back({m, n, std::log(y), zeta});
  }
  return out;
}

// bisect |z(t) - zeta| = rho on the side of t_p indicated by dir
Real crossing_param(const std::function<Cplx(Real)>& z, Cplx zeta, Real t_p,
                    Real dir, Real t_limit, Real rho) {
  Real step = rho;  // expanded until the circle is exited
  Real a = t_p;
  for (int i = 0; i < 200; ++i) {
    Real cand = t_p + dir * step;
    if ((dir > 0 && cand > t_limit) || (dir < 0 && cand < t_limit)) {
      cand = t_limit;
      if (std::abs(z(cand) - zeta) <= rho)
        throw precision_error("detour circle reaches a path endpoint");
      a = cand;
      break;
    }
    if (std::abs(z(cand) - zeta) > rho) {
      a = cand;
      break;
    }
    step *= 2;
    if (i == 199) throw precision_error("pole detour bracket failed");
  }
  Real lo = t_p, hi = a;  // |z(lo)-zeta| < rho < |z(hi)-zeta|
  for (int i = 0; i < 120; ++i) {
    Real mid = (lo + hi) / 2;
    if (std::abs(z(mid) - zeta) < rho)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

BuiltPath build_path(std::function<Cplx(Real)> zf, std::function<Cplx(Real)> dzf,
                     Real t0, Real t1, std::vector<PoleSite> poles, Real rho) {
  const Real dir = (t1 >= t0) ? 1.0 : -1.0;
  std::sort(poles.begin(), poles.end(),
            [&](const PoleSite& a, const PoleSite& b) {
              return dir > 0 ? a.t < b.t : a.t > b.t;
            });
  for (size_t i = 0; i + 1 < poles.size(); ++i)
    if (std::abs(poles[i].zeta - poles[i + 1].zeta) < 3 * rho)
      throw precision_error("pole detours overlap");
  for (const PoleSite& p : poles)
    if (p.zeta.imag() < 3 * rho)
      throw precision_error("pole too close to the boundary for the detour");
  BuiltPath bp;
  bp.z = zf;
  bp.dz = dzf;
  Real cursor = t0;
  for (const PoleSite& p : poles) {
    Real t_in = crossing_param(zf, p.zeta, p.t, -dir, cursor, rho);
    Real t_out = crossing_param(zf, p.zeta, p.t, dir, t1, rho);
    bp.segs.push_back({cursor, t_in});
    Real phi_in = std::arg(zf(t_in) - p.zeta);
    Real phi_out = std::arg(zf(t_out) - p.zeta);
    Real dccw = phi_out - phi_in;
    dccw -= 2 * PI * std::floor(dccw / (2 * PI));
    if (dccw == 0) dccw = 2 * PI;
    bp.detours.push_back({p.zeta, phi_in, dccw});
    cursor = t_out;
  }
  bp.segs.push_back({cursor, t1});
  return bp;
}

// --------------------------------------------- the two consumers of a path

struct PathValue {
  Cplx value;
  std::vector<PVCorrection> pv;
};

// tightest certifiable evaluation; the loose end of the ladder is only ever
// reached within ~1e-3 of a pole, where the integrand is premultiplied by a
// detour radius of the same size
Cplx eval_g_pt(const ThirdKindForm& eta, Cplx z) {
  for (Real tol : {kPointTol, 1e-10, 1e-8, 1e-6}) {
    try {
      return eval_form(eta, z, tol);
    } catch (const precision_error&) {
    }
  }
  return eval_form(eta, z, 1e-5);
}

PathValue integrate_built(const BuiltPath& bp, const ThirdKindForm& eta,
                          Real tol) {
  Integrand along = [&](Real t) { return eval_g_pt(eta, bp.z(t)) * bp.dz(t); };
  PathValue out{Cplx(0, 0), {}};
  Real tol_seg = tol / Real(bp.segs.size() + 2 * bp.detours.size() + 1);
  for (auto [a, b] : bp.segs) out.value += path_int(along, a, b, tol_seg);
  for (const DetourSpec& d : bp.detours) {
    Integrand circ = [&](Real phi) {
      Cplx off = kDetourRadius * std::exp(Cplx(0, phi));
      return eval_g_pt(eta, d.zeta + off) * Cplx(0, 1) * off;
    };
    Cplx ccw = path_int(circ, d.phi_in, d.phi_in + d.dccw, tol_seg);
    Cplx cw = path_int(circ, d.phi_in, d.phi_in - (2 * PI - d.dccw), tol_seg);
    out.value += (ccw + cw) / 2.0;
    out.pv.push_back({d.zeta, ccw, cw});
  }
  return out;
}

Cplx w_of(Cplx z) { return eval_j_raw(z) - 1728.0; }

// a chord of sampled arguments can hide full turns when both halves wind by
// the same amount, so a leaf is only accepted once the logarithmic
// derivative bounds the true phase motion across it
Real track_arg(const std::function<Cplx(Real)>& pt,
               const std::function<Real(Real)>& rate, Real a, Cplx wa, Real b,
               Cplx wb, int depth) {
  if (depth >= kTrackDepth)
    throw precision_error("argument tracking did not stabilize");
  Real dphi = std::arg(wb / wa);
  Real mid = (a + b) / 2;
  if (std::abs(dphi) <= 0.35 && depth >= 6) {
    Real rmax = std::max({rate(a), rate(mid), rate(b)});
    if (std::abs(b - a) * rmax <= 0.5) {
      Cplx wm = pt(mid);
      Real d1 = std::arg(wm / wa), d2 = std::arg(wb / wm);
      if (std::abs(d1 + d2 - dphi) < 1e-9) return dphi;
    }
  }
  Cplx wm = pt(mid);
  return track_arg(pt, rate, a, wa, mid, wm, depth + 1) +
         track_arg(pt, rate, mid, wm, b, wb, depth + 1);
}

Real track_piece(const std::function<Cplx(Real)>& pt,
                 const std::function<Real(Real)>& rate, Real a, Real b) {
  if (a == b) return 0;
  return track_arg(pt, rate, a, pt(a), b, pt(b), 0);
}

// average of the counterclockwise and clockwise continuations of the
// argument of j - 1728 along the path
Real track_built(const BuiltPath& bp) {
  const ThirdKindForm plain{+1};
  std::function<Cplx(Real)> along = [&](Real t) { return w_of(bp.z(t)); };
  std::function<Real(Real)> along_rate = [&](Real t) {
    return std::abs(eval_g_pt(plain, bp.z(t))) * std::abs(bp.dz(t));
  };
  Real straight = 0;
  for (auto [a, b] : bp.segs)
    straight += track_piece(along, along_rate, a, b);
  Real det = 0;
  for (const DetourSpec& d : bp.detours) {
    std::function<Cplx(Real)> circ = [&](Real phi) {
      return w_of(d.zeta + kDetourRadius * std::exp(Cplx(0, phi)));
    };
    std::function<Real(Real)> circ_rate = [&](Real phi) {
      Cplx z = d.zeta + kDetourRadius * std::exp(Cplx(0, phi));
      return std::abs(eval_g_pt(plain, z)) * kDetourRadius;
    };
    Real ccw = track_piece(circ, circ_rate, d.phi_in, d.phi_in + d.dccw);
    Real cw =
        track_piece(circ, circ_rate, d.phi_in, d.phi_in - (2 * PI - d.dccw));
    det += (ccw + cw) / 2;
  }
  return straight + det;
}

// --------------------------------------------------------- closed geodesics

struct ClosedGeom {
  Real cx = 0, R = 1;
  Real th0 = 0, th1 = 0;  // travel th0 -> th1, both in (0, pi)
  std::vector<PoleSite> poles;
};

ClosedGeom make_closed_geom(const QuadForm& f, Real base_angle,
                            bool allow_shift) {
  GeodesicArc arc = geodesic(f);
  if (arc.split)
    throw std::domain_error("closed-cycle routine on a split form");
  if (!arc.stabilizer)
    throw std::runtime_error("closed geodesic without a stabilizer");
  ClosedGeom g;
  g.cx = arc.center.to_real();
  g.R = arc.radius;
  Mat2 gam = *arc.stabilizer;
  bool flipped = false;
  const Real margin = 4 * kDetourRadius / g.R;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Real th0 = allow_shift && attempt > 0
                   ? 0.08 + std::fmod(base_angle - 0.08 + attempt * 0.37,
                                      PI - 0.16)
                   : base_angle;
    Cplx z0 = g.cx + g.R * std::exp(Cplx(0, th0));
    Cplx z1 = moebius(gam, z0);
    Real th1 = std::atan2(z1.imag(), z1.real() - g.cx);
    // travel in the positive direction of the cycle: increasing angle
    // exactly when the leading coefficient is positive
    bool want_up = arc.orientation > 0;
    if ((th1 > th0) != want_up) {
      if (flipped)
        throw std::runtime_error("stabilizer does not translate the arc");
      gam = m_inv(gam);
      flipped = true;
      z1 = moebius(gam, z0);
      th1 = std::atan2(z1.imag(), z1.real() - g.cx);
      if ((th1 > th0) != want_up)
        throw std::runtime_error("stabilizer does not translate the arc");
    }
    auto poles = poles_on_circle(f, g.cx, g.R, std::min(th0, th1),
                                 std::max(th0, th1));
    bool clear = true;
    for (const PoleSite& p : poles)
      if (std::abs(p.t - th0) < margin || std::abs(p.t - th1) < margin)
        clear = false;
    if (!clear) {
      if (!allow_shift)
        throw std::domain_error("a pole sits at the requested base point");
      continue;
    }
    g.th0 = th0;
    g.th1 = th1;
    g.poles = std::move(poles);
    return g;
  }
  throw std::runtime_error("could not place the base point away from poles");
}

BuiltPath closed_path(const ClosedGeom& g) {
  Real cx = g.cx, R = g.R;
  auto zf = [cx, R](Real t) { return Cplx(cx, 0) + R * std::exp(Cplx(0, t)); };
  auto dzf = [R](Real t) { return Cplx(0, R) * std::exp(Cplx(0, t)); };
  return build_path(zf, dzf, g.th0, g.th1, g.poles, kDetourRadius);
}

CycleIntegralResult closed_value(const ThirdKindForm& eta, const QuadForm& f,
                                 Real tol, Real base_angle, bool allow_shift) {
  ClosedGeom g = make_closed_geom(f, base_angle, allow_shift);
  PathValue pv = integrate_built(closed_path(g), eta, tol);
  CycleIntegralResult res;
  res.value = pv.value;
  res.method = "quadrature";
  res.pv_corrections = std::move(pv.pv);
  res.split_log_coefficient = Rational(0);
  return res;
}

// ----------------------------------------------------------- split geodesics

struct SplitFrame {
  Rational r;     // vertical coordinate line Re z = r carrying the cycle
  i64 s2 = 1;     // bottom-end scale: the other cusp height is 1/(s2 y)
};

SplitFrame split_frame(const QuadForm& f) {
  auto [r, sigma] = split_real_part(f);
  // bottom endpoint sigma(r) as an exact boundary point
  i64 p = sigma.a * r.num + sigma.b * r.den;
  i64 q = sigma.c * r.num + sigma.d * r.den;
  if (q < 0) {
    p = -p;
    q = -q;
  }
  Mat2 M = cusp_section(normalize_cusp(p, q));
  Mat2 W = m_mul(m_inv(M), sigma);
  if (W.c * r.num + W.d * r.den != 0)
    throw std::runtime_error("cusp section does not send the endpoint to oo");
  if (W.c == 0) throw std::runtime_error("split endpoint is not finite");
  return {r, W.c * W.c};
}

struct SplitCut {
  Real y_lo = 0, y_hi = 1;
  BuiltPath path;
};

SplitCut split_cut(const SplitFrame& fr, Real Y) {
  SplitCut cut;
  cut.y_hi = Y;
  cut.y_lo = 1.0 / (Real(fr.s2) * Y);
  if (cut.y_lo >= cut.y_hi)
    throw std::domain_error("regularization window is empty");
  Real x = fr.r.to_real();
  auto zf = [x](Real u) { return Cplx(x, std::exp(u)); };
  auto dzf = [](Real u) { return Cplx(0, std::exp(u)); };
  auto poles = poles_on_vline(fr.r, cut.y_lo, cut.y_hi);
  for (const PoleSite& p : poles)
    if (p.zeta.imag() < cut.y_lo + 3 * kDetourRadius ||
        p.zeta.imag() > cut.y_hi - 3 * kDetourRadius)
      throw precision_error("regularization cutoff hits a pole");
  cut.path = build_path(zf, dzf, std::log(cut.y_lo), std::log(cut.y_hi),
                        std::move(poles), kDetourRadius);
  return cut;
}

// ladder indices with base^-k near 2^-26, 2^-28, 2^-30
std::array<i64, 3> ladder_indices(i64 base, i64* gap_out) {
  if (base < 2) throw std::domain_error("ladder base must be at least 2");
  Real lb = std::log(Real(base));
  i64 k1 = std::max<i64>(2, (i64)std::llround(26.0 * std::log(2.0) / lb));
  i64 gap = std::max<i64>(1, (i64)std::llround(2.0 * std::log(2.0) / lb));
  *gap_out = gap;
  return {k1, k1 + gap, k1 + 2 * gap};
}

CycleIntegralResult split_value(const ThirdKindForm& eta, const QuadForm& f,
                                Real tol, i64 base) {
  SplitFrame fr = split_frame(f);
  i64 gap = 1;
  auto ks = ladder_indices(base, &gap);
  std::array<Cplx, 3> vals{};
  std::vector<PVCorrection> pv_fine;
  for (int i = 0; i < 3; ++i) {
    Real Y = Real(ks[i]) * std::log(Real(base)) / (2 * PI);
    SplitCut cut = split_cut(fr, Y);
    PathValue pvv = integrate_built(cut.path, eta, tol / 8);
    vals[i] = pvv.value;
    if (i == 2) pv_fine = std::move(pvv.pv);
  }
  // the cutoff error is a power series in eps = base^-k; two Richardson
  // levels on the exact ratio rho = base^gap
  Real rho = std::pow(Real(base), Real(gap));
  Cplx a1 = (rho * vals[1] - vals[0]) / (rho - 1);
  Cplx a2 = (rho * vals[2] - vals[1]) / (rho - 1);
  Cplx lim = (rho * rho * a2 - a1) / (rho * rho - 1);
  if (std::abs(a2 - a1) > std::max(tol, 1e-9))
    throw precision_error("split regularization ladder did not converge");
  CycleIntegralResult res;
  res.value = lim;
  res.method = "quadrature";
  res.pv_corrections = std::move(pv_fine);
  // both ends of the cycle lie over the pole divisor point [oo], so the
  // logarithmic coefficients of the two ends cancel exactly
  Rational per_end = residue_divisor(eta).at("oo");
  res.split_log_coefficient = per_end - per_end;
  return res;
}

void check_level_tag(const QuadForm& f, i64 N) {
  if (f.n != N) throw std::domain_error("form level tag does not match N");
  if (discriminant(f) <= 0)
    throw std::domain_error("cycle integrals need positive discriminant");
}

}  // namespace

// ------------------------------------------------------------------- public

CycleIntegralResult cycle_integral(const ThirdKindForm& eta, const QuadForm& f,
                                   i64 N, Real tol) {
  check_level_tag(f, N);
  if (geodesic(f).split) return split_value(eta, f, tol, 2);
  return closed_value(eta, f, tol, PI / 2, true);
}

CycleIntegralResult cycle_integral_ladder(const ThirdKindForm& eta,
                                          const QuadForm& f, i64 N, Real tol,
                                          i64 base) {
  check_level_tag(f, N);
  if (!geodesic(f).split)
    throw std::domain_error("regularization ladders apply to split cycles");
  return split_value(eta, f, tol, base);
}

CycleIntegralResult cycle_integral_at(const ThirdKindForm& eta,
                                      const QuadForm& f, i64 N, Real tol,
                                      Real base_angle) {
  check_level_tag(f, N);
  if (geodesic(f).split)
    throw std::domain_error("base angles apply to closed cycles");
  if (base_angle <= 0 || base_angle >= PI)
    throw std::domain_error("base angle must lie in (0, pi)");
  return closed_value(eta, f, tol, base_angle, false);
}

Real winding_index(const QuadForm& f, Real tol) {
  if (discriminant(f) <= 0)
    throw std::domain_error("winding needs positive discriminant");
  if (geodesic(f).split)
    throw std::domain_error("winding index is defined for closed cycles");
  (void)tol;
  ClosedGeom g = make_closed_geom(f, PI / 2, true);
  return track_built(closed_path(g)) / (2 * PI);
}

Real winding_index_line(const QuadForm& f, i64 N, Real tol) {
  check_level_tag(f, N);
  if (!geodesic(f).split)
    throw std::domain_error("line winding is defined for split cycles");
  SplitFrame fr = split_frame(f);
  // the cutoff error of the tracked argument is c 2^-k + O(4^-k), so one
  // Richardson level on consecutive ladder points removes it; two
  // extrapolations provide the stability check
  std::array<Real, 3> raw{};
  const i64 ks[3] = {30, 34, 38};
  for (int i = 0; i < 3; ++i) {
    Real Y = Real(ks[i]) * std::log(2.0) / (2 * PI);
    SplitCut cut = split_cut(fr, Y);
    raw[i] = track_built(cut.path) / (2 * PI);
  }
  const Real rho = 16.0;  // 2^(k-step)
  Real e1 = (rho * raw[1] - raw[0]) / (rho - 1);
  Real e2 = (rho * raw[2] - raw[1]) / (rho - 1);
  if (std::abs(e2 - e1) > std::max(tol / 2, 1e-8))
    throw precision_error("line winding did not stabilize in the cutoff");
  return e2;
}

Rational L0(i64 delta) {
  if (delta >= 0 || !is_fundamental_discriminant(delta))
    throw std::domain_error("L0 needs a negative fundamental discriminant");
  i64 a = -delta;
  Rational acc(0);
  for (i64 c = 0; c < a; ++c) {
    i64 k = kronecker(delta, c);
    if (k == 0) continue;
    acc = acc + Rational(k) * sawtooth_b1(Rational(-c, a));
  }
  return acc;
}

namespace {

void check_trace_args(i64 delta, i64 d) {
  if (delta >= 0 || !is_fundamental_discriminant(delta))
    throw std::domain_error("twist needs a negative fundamental discriminant");
  if (d <= 0 || (mod_pos(d, 4) != 0 && mod_pos(d, 4) != 3))
    throw std::domain_error("trace index must be 0 or 3 mod 4");
}

}  // namespace

Real trace(i64 delta, i64 r, i64 N, i64 d, const ThirdKindForm& eta,
           Real tol) {
  check_trace_args(delta, d);
  GenusCharContext ctx = make_genus_context(delta, r, N);
  ClassList cl = enumerate_classes(N, d * (-delta));
  Cplx acc(0, 0);
  for (const QuadForm& f : cl.reps) {
    i64 chi = genus_character(ctx, f);
    if (chi == 0) continue;
    CycleIntegralResult ci = cycle_integral(eta, f, N, tol);
    acc += Real(chi) * ci.value;
  }
  Cplx ind = acc / Cplx(0, 2 * PI);
  if (std::abs(ind.imag()) > 1e-6)
    throw precision_error("trace accumulated a non-real part");
  return ind.real();
}

Real trace_index_route(i64 delta, i64 r, i64 d, Real tol) {
  check_trace_args(delta, d);
  const i64 N = 1;
  GenusCharContext ctx = make_genus_context(delta, r, N);
  ClassList cl = enumerate_classes(N, d * (-delta));
  Real acc = 0;
  for (const QuadForm& f : cl.reps) {
    i64 chi = genus_character(ctx, f);
    if (chi == 0) continue;
    Real ind = geodesic(f).split ? winding_index_line(f, N, tol)
                                 : winding_index(f, tol);
    acc += Real(chi) * ind;
  }
  return acc;
}

TraceTable generating_series(i64 delta, i64 r, i64 N, const ThirdKindForm& eta,
                             i64 d_max, Real tol) {
  if (d_max < 3) throw std::domain_error("series needs d_max >= 3");
  GenusCharContext ctx = make_genus_context(delta, r, N);
  TraceTable table;
  table.delta = delta;
  table.level = N;
  Rational l0 = L0(delta);
  // the constant term carries the sign of the residue at [i]
  table.constant = Rational(-eta.sign) * l0;
  for (i64 d = 3; d <= d_max; ++d) {
    if (mod_pos(d, 4) != 0 && mod_pos(d, 4) != 3) continue;
    ClassList cl = enumerate_classes(N, d * (-delta));
    if (cl.reps.empty()) continue;
    TraceEntry entry;
    Cplx acc(0, 0);
    for (const QuadForm& f : cl.reps) {
      i64 chi = genus_character(ctx, f);
      if (chi == 0) continue;
      CycleIntegralResult ci = cycle_integral(eta, f, N, tol);
      acc += Real(chi) * ci.value;
      Real ind = geodesic(f).split ? winding_index_line(f, N, tol)
                                   : winding_index(f, tol);
      entry.classes.push_back({f, (int)chi, ind});
    }
    Cplx tr = acc / Cplx(0, 2 * PI);
    if (std::abs(tr.imag()) > 1e-6)
      throw precision_error("trace accumulated a non-real part");
    entry.value = tr.real();
    table.entries[d] = std::move(entry);
  }
  return table;
}

std::string trace_table_json(const TraceTable& t) {
  nlohmann::ordered_json j;
  j["Delta"] = t.delta;
  j["N"] = t.level;
  j["constant"] = {{"num", t.constant.num}, {"den", t.constant.den}};
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& [d, entry] : t.entries) {
    nlohmann::ordered_json je;
    je["d"] = d;
    je["trace"] = entry.value;
    je["classes"] = nlohmann::ordered_json::array();
    for (const TraceClassEntry& c : entry.classes) {
      nlohmann::ordered_json jc;
      jc["form"] = {c.form.a, c.form.b, c.form.c};
      jc["chi"] = c.chi;
      jc["ind"] = c.ind;
      je["classes"].push_back(jc);
    }
    j["entries"].push_back(je);
  }
  return j.dump();
}

}  // namespace wind
