#pragma once
// Integral binary quadratic forms [A,B,C] = Ax^2+Bxy+Cy^2 of positive
// discriminant, their level-N class sets {N | A}, genus characters and
// automorphs.  The group action used everywhere is column substitution,
//   (g.f)(x,y) := f(p x + q y, r x + s y)   for g = [[p,q],[r,s]],
// which satisfies (g1.(g2.f)) = (g2 g1).f and sends the root set of f to
// g^{-1} applied to it.

#include <optional>
#include <utility>
#include <vector>

#include "wind/arith.hpp"

namespace wind {

struct Mat2 {
  i64 a = 1, b = 0, c = 0, d = 1;  // [[a,b],[c,d]]

  i64 det() const { return checked_i64(mul_i128(a, d) - mul_i128(b, c)); }
  i64 tr() const { return checked_i64(i128(a) + d); }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2 m_mul(const Mat2& x, const Mat2& y);
Mat2 m_inv(const Mat2& x);  // requires det = 1
inline Mat2 m_id() { return {1, 0, 0, 1}; }
inline Mat2 m_T() { return {1, 1, 0, 1}; }
inline Mat2 m_S() { return {0, -1, 1, 0}; }
inline Mat2 m_L(i64 n) { return {1, 0, n, 1}; }
inline Mat2 m_neg(const Mat2& x) { return {-x.a, -x.b, -x.c, -x.d}; }
Cplx moebius(const Mat2& g, Cplx z);
// derivative factor 1/(cz+d)^2 of the moebius map at z
Cplx moebius_jacobian(const Mat2& g, Cplx z);

struct QuadForm {
  i64 a = 0, b = 0, c = 0;
  i64 n = 1;  // level; membership in the level set requires n | a

  friend bool operator==(const QuadForm&, const QuadForm&) = default;
  std::string str() const;
};

i64 discriminant(const QuadForm& f);
i64 content(const QuadForm& f);  // gcd(|a|,|b|,|c|) >= 0
QuadForm gamma0N_action(const Mat2& g, const QuadForm& f);
bool is_split_hyperbolic(const QuadForm& f, i64 N);
// evaluate f(x,y)
i64 form_value(const QuadForm& f, i64 x, i64 y);

// class enumeration --------------------------------------------------------

struct ClassList {
  std::vector<QuadForm> reps;
  bool residue_ok = true;  // false: D = 2,3 mod 4, no forms exist
};

// all orbit representatives of the level-N action on {[A,B,C] : N|A, disc=D},
// imprimitive and split forms included
ClassList enumerate_classes(i64 N, i64 D);

// reduction machinery (exposed for tests and geometry) ----------------------

bool is_reduced_indefinite(const QuadForm& f);
// reduce a non-square-discriminant form; returns (reduced, h) with h.f = reduced
std::pair<QuadForm, Mat2> reduce_with_transporter(const QuadForm& f);
// square-discriminant normal form [0, k, c], 0 <= c < k; returns (normal, h)
std::pair<QuadForm, Mat2> split_normal_form(const QuadForm& f);
// all reduced forms of non-square discriminant D (all contents)
std::vector<QuadForm> reduced_forms(i64 D);
// SL2(Z)-equivalence with transporter: h.f = g if it exists
bool sl2_equivalent(const QuadForm& f, const QuadForm& g, Mat2* h = nullptr);
// level-N equivalence: gamma in the level group with gamma.f = g
bool gamma0N_equivalent(const QuadForm& f, const QuadForm& g, i64 N,
                        Mat2* gamma = nullptr);

// fundamental solution (t, u), u > 0 minimal, of t^2 - D u^2 = 4; D > 0
// non-square; throws resource error when u exceeds the search bound
std::pair<i64, i64> pell_fundamental(i64 D, i64 u_bound = 20000000);

// generator of the stabilizer of f inside the level-N group, translating
// points of the geodesic of f toward the first root (-b+sqrt(D))/(2a);
// nullopt for split-hyperbolic f
std::optional<Mat2> automorph(const QuadForm& f, i64 N);

// genus character -----------------------------------------------------------

struct GenusCharContext {
  i64 delta = -3;  // fundamental, < 0
  i64 r = 1;       // delta = r^2 mod 4N
  i64 n = 1;       // level
};
GenusCharContext make_genus_context(i64 delta, i64 r, i64 N);
int genus_character(const GenusCharContext& ctx, const QuadForm& f);

// coset representatives g_j of SL2(Z)/Gamma0(N), indexed by the first column
// mod N in P^1(Z/N)
std::vector<Mat2> gamma0N_coset_reps(i64 N);

}  // namespace wind
