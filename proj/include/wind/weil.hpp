#pragma once
// Finite quadratic modules, the attached generator representation on the
// group algebra, half-integral-weight slash action, the character twist into
// the rescaled module, and scalarization of vector-valued series.

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wind/arith.hpp"
#include "wind/qforms.hpp"

namespace wind {

// finite abelian group (Z/m_0) x ... x (Z/m_{k-1}) carrying Q: G -> Q/Z given
// by a rational Gram matrix: Q(x) = sum_i g_ii x_i^2 + sum_{i<j} 2 g_ij x_i x_j
// mod 1.  The Gram data must make Q well defined on the quotient; the two
// factory functions below guarantee this.
struct DiscriminantForm {
  std::vector<i64> mods;
  std::vector<std::vector<Rational>> gram;  // symmetric, size k x k
  int sig_plus = 0, sig_minus = 0;

  i64 order() const;
  std::vector<i64> element(i64 idx) const;         // mixed-radix decode
  i64 index_of(std::vector<i64> coords) const;     // coords reduced mod mods
  Rational q_value(i64 idx) const;                 // Q(h) in [0,1)
  Rational bilinear(i64 i, i64 j) const;           // (h_i, h_j) in [0,1)
  i64 neg(i64 idx) const;                          // index of -h
  i64 add(i64 i, i64 j) const;                     // index of h_i + h_j
};

// L'/L of the level-N lattice of trace-zero coordinate triples: cyclic of
// order 2N, Q(b) = b^2/4N, signature (2,1)
DiscriminantForm discriminant_form_for_gamma0N(i64 N);

// quotient L'/(Delta L) with the sign-carrying rescaled form Q/Delta
// (Delta < 0 fundamental), signature (1,2).  Coordinates (a, b, c) stand for
// the stored form [N a, b, c] with a mod |Delta|, b mod 2N|Delta|, c mod
// |Delta|.
DiscriminantForm twisted_discriminant_form(i64 N, i64 delta);

using VVVector = Eigen::VectorXcd;

// generator images on the group algebra
Eigen::VectorXcd rho_T(const DiscriminantForm& d);  // diagonal, entry e(Q(h))
Eigen::MatrixXcd rho_S(const DiscriminantForm& d);
// apply rho(S) without materializing the matrix (large modules)
VVVector rho_S_apply(const DiscriminantForm& d, const VVVector& v);

// integer-matrix word in the two standard generators together with the
// square-root branch data carried along the word (letter 0 = S, letter n != 0
// = T^n); multiplying words keeps the branch bookkeeping exact
struct MetaplecticElement {
  Mat2 mat = m_id();
  std::vector<i64> word;

  static MetaplecticElement identity();
  static MetaplecticElement T(i64 n = 1);
  static MetaplecticElement S();
  friend MetaplecticElement operator*(const MetaplecticElement& x,
                                      const MetaplecticElement& y);
  // the branch factor phi(tau) with phi(tau)^2 = c tau + d, composed letterwise
  Cplx phase(Cplx tau) const;
};

// rho of a generator word
Eigen::MatrixXcd rho_word(const DiscriminantForm& d, const MetaplecticElement& g);

// (f |_k g)(tau) = phi(tau)^{-2k} f(g tau); k half-integral
VVVector slash_action(const std::function<VVVector(Cplx)>& f, const Rational& k,
                      const MetaplecticElement& g, Cplx tau);

// component map e_h -> sum over delta in the fiber {pi(delta) = r h,
// Q_D(delta) = Q(h)} of chi_Delta(delta) e_delta, as a (big x small) matrix.
// No orbit-index normalization is applied.
Eigen::MatrixXcd twist_map(const DiscriminantForm& small_form,
                           const DiscriminantForm& big_form, i64 delta, i64 r);

// one nonholomorphic Fourier coefficient: constant plus erfc-shaped plus
// Gaussian-shaped pieces of the modulus variable v
struct CoeffFn {
  struct ErfcTerm {
    Cplx s;  // s * erfc(a sqrt(v)) / 2
    Real a;
  };
  struct GaussTerm {
    Cplx g;  // g * v^{3/2} * exp(-b v)
    Real b;
  };
  Cplx constant{0, 0};
  std::vector<ErfcTerm> erfcs;
  std::vector<GaussTerm> gauss;

  Cplx eval(Real v) const;
  bool trivial() const { return constant == Cplx(0, 0) && erfcs.empty() && gauss.empty(); }
  CoeffFn& operator+=(const CoeffFn& other);
};

// vector-valued q-series over the order-2N cyclic module; the key of a term
// in component h is the rescaled exponent d = 4N m (always an integer for
// series supported on Q(h) + Z)
struct VVSeries {
  i64 n = 1;
  std::vector<std::map<i64, CoeffFn>> comps;  // size 2N

  explicit VVSeries(i64 level = 1) : n(level), comps(2 * level) {}
  void add(i64 h, i64 d, const CoeffFn& c);
};

struct ScalarSeries {
  std::map<i64, CoeffFn> terms;  // q^d with tau rescaled by 4N upstream
};

// sum the components after the exponent rescale m -> d = 4N m
ScalarSeries scalarize(const VVSeries& s);

// JSON text {order, generators, q_values, signature} (fractions as "p/q")
std::string dform_to_json(const DiscriminantForm& d);

}  // namespace wind
