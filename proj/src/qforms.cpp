#include "wind/qforms.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace wind {

Mat2 m_mul(const Mat2& x, const Mat2& y) {
  Mat2 r;
  r.a = checked_i64(add_i128(mul_i128(x.a, y.a), mul_i128(x.b, y.c)), "matrix entry overflow");
  r.b = checked_i64(add_i128(mul_i128(x.a, y.b), mul_i128(x.b, y.d)), "matrix entry overflow");
  r.c = checked_i64(add_i128(mul_i128(x.c, y.a), mul_i128(x.d, y.c)), "matrix entry overflow");
  r.d = checked_i64(add_i128(mul_i128(x.c, y.b), mul_i128(x.d, y.d)), "matrix entry overflow");
  return r;
}

Mat2 m_inv(const Mat2& x) {
  if (x.det() != 1) throw std::domain_error("matrix inverse needs determinant 1");
  return {x.d, -x.b, -x.c, x.a};
}

Cplx moebius(const Mat2& g, Cplx z) {
  return (Real(g.a) * z + Real(g.b)) / (Real(g.c) * z + Real(g.d));
}

Cplx moebius_jacobian(const Mat2& g, Cplx z) {
  Cplx den = Real(g.c) * z + Real(g.d);
  return Cplx(1, 0) / (den * den);
}

std::string QuadForm::str() const {
  return "[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "]";
}

i64 discriminant(const QuadForm& f) {
  return checked_i64(mul_i128(f.b, f.b) - 4 * mul_i128(f.a, f.c), "discriminant overflow");
}

i64 content(const QuadForm& f) { return gcd64(gcd64(f.a, f.b), f.c); }

i64 form_value(const QuadForm& f, i64 x, i64 y) {
  i128 v = mul_i128(f.a, mul_i128(x, x));
  v = add_i128(v, mul_i128(f.b, mul_i128(x, y)));
  v = add_i128(v, mul_i128(f.c, mul_i128(y, y)));
  return checked_i64(v, "form value overflow");
}

namespace {

// column substitution without the level-membership precondition
QuadForm form_subst(const Mat2& g, const QuadForm& f) {
  QuadForm r;
  r.n = f.n;
  r.a = form_value(f, g.a, g.c);
  r.c = form_value(f, g.b, g.d);
  i128 m = 2 * mul_i128(f.a, mul_i128(g.a, g.b));
  m = add_i128(m, mul_i128(f.b, add_i128(mul_i128(g.a, g.d), mul_i128(g.b, g.c))));
  m = add_i128(m, 2 * mul_i128(f.c, mul_i128(g.c, g.d)));
  r.b = checked_i64(m, "form coefficient overflow");
  return r;
}

struct FormKey {
  i64 k0, k1, k2, k3, k4;
  friend auto operator<=>(const FormKey&, const FormKey&) = default;
};
FormKey form_key(const QuadForm& f) {
  return {std::abs(f.a), f.a, std::abs(f.b), f.b, f.c};
}

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

struct Mat2ModN {
  i64 a, b, c, d;
  friend bool operator==(const Mat2ModN&, const Mat2ModN&) = default;
};
Mat2ModN reduce_mod(const Mat2& m, i64 N) {
  return {mod_pos(m.a, N), mod_pos(m.b, N), mod_pos(m.c, N), mod_pos(m.d, N)};
}
Mat2ModN mulmod(const Mat2ModN& x, const Mat2ModN& y, i64 N) {
  return {mod_pos(x.a * y.a + x.b * y.c, N), mod_pos(x.a * y.b + x.b * y.d, N),
          mod_pos(x.c * y.a + x.d * y.c, N), mod_pos(x.c * y.b + x.d * y.d, N)};
}

// powers of m mod N until the cycle closes at the identity
std::vector<Mat2ModN> power_cycle_mod(const Mat2& m, i64 N) {
  Mat2ModN id{1 % N, 0, 0, 1 % N};
  std::vector<Mat2ModN> out{id};
  if (N == 1) return out;
  Mat2ModN mm = reduce_mod(m, N), x = mm;
  int guard = 0;
  while (!(x == id)) {
    out.push_back(x);
    x = mulmod(x, mm, N);
    if (++guard > 200000) throw std::runtime_error("automorph order mod N exceeds bound 200000");
  }
  return out;
}

// SL2(Z) automorph generator (no level scaling); disc(f) must be non-square
Mat2 sl2_automorph(const QuadForm& f) {
  i64 g = content(f);
  if (g == 0) throw std::domain_error("zero form has no automorph");
  QuadForm fp{f.a / g, f.b / g, f.c / g, f.n};
  i64 Dp = discriminant(fp);
  auto [t, u] = pell_fundamental(Dp);
  Mat2 m;
  m.a = (t - fp.b * u) / 2;
  m.b = -fp.c * u;
  m.c = fp.a * u;
  m.d = (t + fp.b * u) / 2;
  if (!(form_subst(m, f) == f) || m.det() != 1)
    throw std::runtime_error("automorph construction failed");
  return m;
}

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int i) { return p[i] == i ? i : p[i] = find(p[i]); }
  void unite(int i, int j) { p[find(i)] = find(j); }
};

// lexicographically smallest orbit member found by a bounded walk under the
// level-group generators T and [[1,0],[N,1]]
QuadForm canonical_in_orbit(const QuadForm& f0, i64 N) {
  const i64 coeff_cap = i64(1) << 40;
  std::set<std::pair<std::pair<i64, i64>, i64>> seen;
  std::vector<QuadForm> frontier{f0};
  seen.insert({{f0.a, f0.b}, f0.c});
  QuadForm best = f0;
  const Mat2 gens[4] = {m_T(), m_inv(m_T()), m_L(N), m_inv(m_L(N))};
  for (int depth = 0; depth < 12 && !frontier.empty(); ++depth) {
    std::vector<QuadForm> next;
    for (const auto& f : frontier) {
      for (const auto& g : gens) {
        QuadForm h = form_subst(g, f);
        if (std::abs(h.a) > coeff_cap || std::abs(h.b) > coeff_cap || std::abs(h.c) > coeff_cap)
          continue;
        if (!seen.insert({{h.a, h.b}, h.c}).second) continue;
        if (form_key(h) < form_key(best)) best = h;
        next.push_back(h);
        if (seen.size() > 20000) return best;
      }
    }
    frontier = std::move(next);
  }
  return best;
}

}  // namespace

QuadForm gamma0N_action(const Mat2& g, const QuadForm& f) {
  if (g.det() != 1) throw std::domain_error("matrix must have determinant 1");
  if (mod_pos(g.c, f.n) != 0)
    throw std::domain_error("matrix is not in the level group of the form");
  return form_subst(g, f);
}

bool is_split_hyperbolic(const QuadForm& f, i64 N) {
  (void)N;
  i64 D = discriminant(f);
  if (D <= 0) throw std::domain_error("hyperbolicity is for positive discriminants");
  return is_square(D);
}

bool is_reduced_indefinite(const QuadForm& f) {
  i64 D = discriminant(f);
  if (D <= 0 || is_square(D)) return false;
  if (f.b <= 0) return false;
  if (f.b * f.b >= D) return false;
  i64 t = 2 * std::abs(f.a);
  // sqrt(D) - b < 2|a| < sqrt(D) + b, strictly (D non-square)
  if ((t + f.b) * (t + f.b) <= D) return false;
  if (t >= f.b && (t - f.b) * (t - f.b) >= D) return false;
  return true;
}

std::pair<QuadForm, Mat2> reduce_with_transporter(const QuadForm& f0) {
  i64 D = discriminant(f0);
  if (D <= 0 || is_square(D))
    throw std::domain_error("reduction cycle needs positive non-square discriminant");
  i64 s = isqrt64(D);
  QuadForm f = f0;
  Mat2 h = m_id();
  for (int guard = 0; guard < 3000; ++guard) {
    if (is_reduced_indefinite(f)) return {f, h};
    i64 cc = std::abs(f.c);
    if (cc == 0) throw std::runtime_error("degenerate reduction step");
    i64 r0 = mod_pos(-f.b, 2 * cc);
    i64 r = (cc > s) ? cc - mod_pos(cc - r0, 2 * cc) : s - mod_pos(s - r0, 2 * cc);
    i64 m = (r + f.b) / (2 * f.c);
    if ((r + f.b) % (2 * f.c) != 0) throw std::runtime_error("reduction congruence failed");
    Mat2 step{0, -1, 1, m};
    f = form_subst(step, f);
    h = m_mul(h, step);
  }
  throw std::runtime_error("reduction did not terminate");
}

std::pair<QuadForm, Mat2> split_normal_form(const QuadForm& f) {
  i64 D = discriminant(f);
  i64 k = 0;
  if (D <= 0 || !is_square(D, &k) || k == 0)
    throw std::domain_error("split normal form needs positive square discriminant");
  // pivot columns annihilating the form: the two rational roots
  std::vector<std::pair<i64, i64>> pivots;
  if (f.a != 0) {
    for (i64 sgn : {+1, -1}) {
      i64 p = -f.b + sgn * k, q = 2 * f.a;
      i64 g = gcd64(p, q);
      if (g == 0) continue;
      pivots.push_back({p / g, q / g});
    }
  } else {
    pivots.push_back({1, 0});
    i64 g = gcd64(f.c, f.b);
    pivots.push_back({-f.c / g, f.b / g});
  }
  for (auto [p, q] : pivots) {
    if (form_value(f, p, q) != 0) continue;
    i64 x, y;
    if (ext_gcd(p, q, x, y) != 1) continue;
    Mat2 g{p, -y, q, x};
    if (g.det() != 1) continue;
    QuadForm nf = form_subst(g, f);
    if (nf.a != 0 || nf.b != k) continue;  // wrong root: gives b = -k
    i64 m = -floor_div(nf.c, k);
    Mat2 t{1, m, 0, 1};
    QuadForm out = form_subst(t, nf);
    return {out, m_mul(g, t)};
  }
  throw std::runtime_error("no root pivot produced the split normal form");
}

std::vector<QuadForm> reduced_forms(i64 D) {
  if (D <= 0 || is_square(D)) throw std::domain_error("need positive non-square discriminant");
  std::vector<QuadForm> out;
  for (i64 b = (D % 2 == 0) ? 2 : 1; b * b < D; b += 2) {
    i64 m = (D - b * b) / 4;
    for (i64 a = 1; a <= m; ++a) {
      if (m % a != 0) continue;
      i64 c = -(m / a);
      for (i64 sg : {+1, -1}) {
        QuadForm f{sg * a, b, sg * c, 1};
        if (is_reduced_indefinite(f)) out.push_back(f);
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const QuadForm& x, const QuadForm& y) { return form_key(x) < form_key(y); });
  return out;
}

namespace {
bool same_coeffs(const QuadForm& x, const QuadForm& y) {
  return x.a == y.a && x.b == y.b && x.c == y.c;
}
}  // namespace

bool sl2_equivalent(const QuadForm& f, const QuadForm& g, Mat2* h_out) {
  if (discriminant(f) != discriminant(g)) return false;
  if (content(f) != content(g)) return false;
  i64 D = discriminant(f);
  if (D <= 0) throw std::domain_error("equivalence test implemented for positive discriminants");
  if (is_square(D)) {
    auto [nf, hf] = split_normal_form(f);
    auto [ng, hg] = split_normal_form(g);
    if (!same_coeffs(nf, ng)) return false;
    if (h_out) *h_out = m_mul(hf, m_inv(hg));
    return true;
  }
  auto [rf, hf] = reduce_with_transporter(f);
  auto [rg, hg] = reduce_with_transporter(g);
  // walk the cycle of rf looking for rg
  QuadForm cur = rf;
  Mat2 w = m_id();
  i64 s = isqrt64(D);
  for (int guard = 0; guard < 5000; ++guard) {
    if (same_coeffs(cur, rg)) {
      if (h_out) *h_out = m_mul(m_mul(hf, w), m_inv(hg));
      return true;
    }
    // rho-step within the reduced cycle
    i64 cc = std::abs(cur.c);
    i64 r0 = mod_pos(-cur.b, 2 * cc);
    i64 r = s - mod_pos(s - r0, 2 * cc);
    i64 m = (r + cur.b) / (2 * cur.c);
    Mat2 step{0, -1, 1, m};
    cur = form_subst(step, cur);
    w = m_mul(w, step);
    if (same_coeffs(cur, rf)) return false;  // cycle closed without meeting rg
  }
  throw std::runtime_error("cycle walk did not terminate");
}

bool gamma0N_equivalent(const QuadForm& f, const QuadForm& g, i64 N, Mat2* gamma) {
  Mat2 h;
  if (!sl2_equivalent(f, g, &h)) return false;
  i64 D = discriminant(f);
  if (is_square(D)) {
    if (mod_pos(h.c, N) != 0) return false;
    if (gamma) *gamma = h;
    return true;
  }
  Mat2 aut = sl2_automorph(f);
  auto cycle = power_cycle_mod(aut, N);
  Mat2ModN hm = reduce_mod(h, N);
  for (size_t n = 0; n < cycle.size(); ++n) {
    if (mulmod(cycle[n], hm, N).c == 0) {
      if (gamma) {
        Mat2 p = m_id();
        for (size_t i = 0; i < n; ++i) p = m_mul(p, aut);
        *gamma = m_mul(p, h);
      }
      return true;
    }
  }
  return false;
}

std::pair<i64, i64> pell_fundamental(i64 D, i64 u_bound) {
  if (D <= 0 || is_square(D)) throw std::domain_error("Pell equation needs non-square D > 0");
  for (i64 u = 1; u <= u_bound; ++u) {
    i128 t2 = mul_i128(D, mul_i128(u, u)) + 4;
    i64 t2s = checked_i64(t2, "Pell search overflow");
    i64 t = isqrt64(t2s);
    if (i128(t) * t == t2) return {t, u};
  }
  throw std::runtime_error("Pell search exceeded bound u <= " + std::to_string(u_bound));
}

std::optional<Mat2> automorph(const QuadForm& f, i64 N) {
  i64 D = discriminant(f);
  if (D <= 0) throw std::domain_error("automorph needs positive discriminant");
  if (is_square(D)) return std::nullopt;
  Mat2 g = sl2_automorph(f);
  Mat2 x = g;
  for (int guard = 0; guard < 100000; ++guard) {
    if (mod_pos(x.c, N) == 0) return x;
    x = m_mul(x, g);
  }
  throw std::runtime_error("automorph power search exceeded bound");
}

GenusCharContext make_genus_context(i64 delta, i64 r, i64 N) {
  if (delta >= 0 || !is_fundamental_discriminant(delta))
    throw std::domain_error("twist requires a negative fundamental discriminant");
  if (N < 1) throw std::domain_error("level must be positive");
  if (mod_pos(r * r - delta, 4 * N) != 0)
    throw std::domain_error("twist congruence delta = r^2 mod 4N fails");
  return {delta, r, N};
}

int genus_character(const GenusCharContext& ctx, const QuadForm& f) {
  const i64 N = ctx.n, delta = ctx.delta;
  if (mod_pos(f.a, N) != 0) throw std::domain_error("form is not in the level-N set");
  i64 D = discriminant(f);
  if (mod_pos(D, delta) != 0) return 0;
  i64 quot = D / delta;
  // quot must be a square modulo 4N
  bool sq = false;
  for (i64 x = 0; 2 * x <= 4 * N && !sq; ++x)
    if (mod_pos(quot - x * x, 4 * N) == 0) sq = true;
  if (!sq) return 0;
  i64 aa = f.a / N;
  i64 g4 = gcd64(gcd64(aa, f.b), gcd64(f.c, delta));
  if (g4 != 1) return 0;
  // n = value of [N1*aa, B, N2*C] prime to delta, any factorization N1*N2 = N
  for (i64 box = 1; box <= 64; box *= 2) {
    for (i64 n1 = 1; n1 <= N; ++n1) {
      if (N % n1 != 0) continue;
      i64 n2 = N / n1;
      QuadForm rep{n1 * aa, f.b, n2 * f.c, 1};
      for (i64 x = -box; x <= box; ++x)
        for (i64 y = -box; y <= box; ++y) {
          if (std::max(std::abs(x), std::abs(y)) <= box / 2) continue;  // new shell only
          i64 v = form_value(rep, x, y);
          if (v != 0 && gcd64(v, delta) == 1) return kronecker(delta, v);
        }
    }
  }
  throw std::runtime_error("no represented value prime to delta found");
}

std::vector<Mat2> gamma0N_coset_reps(i64 N) {
  if (N == 1) return {m_id()};
  // canonical member of each projective class (p:r) mod N under unit scaling
  std::vector<i64> units;
  for (i64 u = 1; u < N; ++u)
    if (gcd64(u, N) == 1) units.push_back(u);
  std::set<std::pair<i64, i64>> seen;
  std::vector<Mat2> reps;
  for (i64 p = 0; p < N; ++p) {
    for (i64 r = 0; r < N; ++r) {
      if (gcd64(gcd64(p, r), N) != 1) continue;
      std::pair<i64, i64> canon{N, N};
      for (i64 u : units)
        canon = std::min(canon, {mod_pos(u * p, N), mod_pos(u * r, N)});
      if (!seen.insert(canon).second) continue;
      // coprime integer lift of (p, r)
      i64 lp = -1, lr = -1;
      for (i64 s = 0; s <= 50 && lp < 0; ++s)
        for (i64 t = 0; t <= 50 && lp < 0; ++t) {
          i64 cp = p + s * N, cr = r + t * N;
          if ((cp | cr) != 0 && gcd64(cp, cr) == 1) {
            lp = cp;
            lr = cr;
          }
        }
      if (lp < 0) throw std::runtime_error("no coprime lift found");
      i64 x, y;
      ext_gcd(lp, lr, x, y);  // lp*x + lr*y = 1
      Mat2 g{lp, -y, lr, x};
      if (g.det() != 1) throw std::runtime_error("coset representative not unimodular");
      reps.push_back(g);
    }
  }
  return reps;
}

ClassList enumerate_classes(i64 N, i64 D) {
  if (N < 1) throw std::domain_error("level must be positive");
  if (D <= 0) throw std::domain_error("class enumeration needs positive discriminant");
  ClassList out;
  i64 Dm = mod_pos(D, 4);
  if (Dm == 2 || Dm == 3) {
    out.residue_ok = false;
    return out;
  }

  // one representative per SL2(Z)-class, all contents included
  std::vector<QuadForm> sl2_reps;
  i64 k = 0;
  bool square = is_square(D, &k);
  if (square) {
    for (i64 c = 0; c < k; ++c) sl2_reps.push_back({0, k, c, N});
  } else {
    auto red = reduced_forms(D);
    std::set<std::pair<std::pair<i64, i64>, i64>> visited;
    i64 s = isqrt64(D);
    for (const auto& f : red) {
      if (visited.count({{f.a, f.b}, f.c})) continue;
      QuadForm cur = f, best = f;
      for (int guard = 0; guard < 5000; ++guard) {
        visited.insert({{cur.a, cur.b}, cur.c});
        i64 cc = std::abs(cur.c);
        i64 r0 = mod_pos(-cur.b, 2 * cc);
        i64 r = s - mod_pos(s - r0, 2 * cc);
        i64 m = (r + cur.b) / (2 * cur.c);
        cur = form_subst(Mat2{0, -1, 1, m}, cur);
        if (cur == f) break;
        if (form_key(cur) < form_key(best)) best = cur;
        if (guard == 4999) throw std::runtime_error("cycle walk did not close");
      }
      best.n = N;
      sl2_reps.push_back(best);
    }
  }

  auto cosets = gamma0N_coset_reps(N);
  for (const auto& f0 : sl2_reps) {
    std::vector<Mat2ModN> aut_powers;
    if (square) {
      aut_powers = {Mat2ModN{1 % N, 0, 0, 1 % N}};
    } else {
      aut_powers = power_cycle_mod(sl2_automorph(f0), N);
    }
    // candidates over the coset representatives, filtered by N | A
    std::vector<int> kept;
    std::vector<QuadForm> cand;
    std::vector<Mat2ModN> gj_mod, gj_inv_mod;
    for (size_t j = 0; j < cosets.size(); ++j) {
      QuadForm fj = form_subst(cosets[j], f0);
      fj.n = N;
      if (mod_pos(fj.a, N) != 0) continue;
      kept.push_back(int(j));
      cand.push_back(fj);
      gj_mod.push_back(reduce_mod(cosets[j], N));
      gj_inv_mod.push_back(reduce_mod(m_inv(cosets[j]), N));
    }
    Dsu dsu(int(cand.size()));
    for (size_t j = 0; j < cand.size(); ++j)
      for (size_t l = j + 1; l < cand.size(); ++l) {
        bool merged = false;
        for (const auto& pw : aut_powers) {
          if (mulmod(mulmod(gj_inv_mod[j], pw, N), gj_mod[l], N).c == 0) {
            merged = true;
            break;
          }
        }
        if (merged) dsu.unite(int(j), int(l));
      }
    std::map<int, QuadForm> orbit_best;
    for (size_t j = 0; j < cand.size(); ++j) {
      int root = dsu.find(int(j));
      auto it = orbit_best.find(root);
      if (it == orbit_best.end() || form_key(cand[j]) < form_key(it->second))
        orbit_best[root] = cand[j];
    }
    for (auto& [root, f] : orbit_best) out.reps.push_back(canonical_in_orbit(f, N));
  }
  std::sort(out.reps.begin(), out.reps.end(),
            [](const QuadForm& x, const QuadForm& y) { return form_key(x) < form_key(y); });
  return out;
}

}  // namespace wind
