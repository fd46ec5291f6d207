#pragma once
// Nonholomorphic completion machinery: scaled incomplete gamma, the period
// integral completing a cusp-form coefficient table, finite-difference xi and
// lowering operators, signature (2,1) indefinite theta sums with a two-sided
// sign kernel, the order-three mock theta expansions with an exact two-route
// oracle, and the index-two sublattice block on the denominator-24 grid.

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "wind/arith.hpp"
#include "wind/qseries.hpp"
#include "wind/weil.hpp"

namespace wind {

// e^x Gamma(s, x) for x > 0 and s in {1/2, -1/2}; power series below 1.5,
// Lentz continued fraction above, ~1e-14 relative
Real gamma_upper_scaled(const Rational& s, Real x);

// value at tau of the integral completing a mock form of weight k whose
// shadow has the coefficient table g (weight 2-k, purely holomorphic
// CoeffFns).  Component h is
//   -sum_m conj(b(m)) (4 pi m)^{k-1} Gamma(1-k, 4 pi m v) e(-m conj(tau)),
// summed stably; terms below tol are dropped.  Only k in {1/2, 3/2}.
VVVector eichler_integral(const VVSeries& g, const Rational& k, Cplx tau,
                          Real tol);

// 2 i v^k conj(d F / d conj(tau)) by central differences in u and v with one
// Richardson step; annihilates holomorphic F and recovers the shadow from a
// completed mock form
VVVector xi_op(const std::function<VVVector(Cplx)>& F, const Rational& k,
               Cplx tau, Real step);
// the lowering operator -2 i v^2 dF / d conj(tau), same stencil
VVVector lowering_op(const std::function<VVVector(Cplx)>& F, Cplx tau,
                     Real step);

// a mock form: exact holomorphic expansion, shadow coefficient table, weight
struct MockPair {
  GridSeries holo;
  VVSeries shadow;
  Rational k;
};

// --- signature (2,1) lattices -----------------------------------------------

struct Sig21Lattice {
  Eigen::Matrix3i gram;  // even symmetric bilinear Gram matrix
};

// validates symmetry, even diagonal, and signature (2,1)
Sig21Lattice make_sig21(const Eigen::Matrix3i& gram);
// coordinate lattice of the level-N group in (A, B, C) coordinates with
// Q([A,B,C]) = N B^2 - A C; the dual classes are (0, k/2N, 0)
Sig21Lattice gamma0N_lattice(i64 N);
// trace-zero part of the quaternion order of reduced discriminant six:
// diag(-2, 6, 6)
Sig21Lattice quaternion_lattice();

using Vec3 = std::array<i64, 3>;
using Vec3Q = std::array<Rational, 3>;

i64 pairing(const Sig21Lattice& lat, const Vec3& x, const Vec3& y);
Rational pairing(const Sig21Lattice& lat, const Vec3Q& x, const Vec3Q& y);
Rational norm_of(const Sig21Lattice& lat, const Vec3Q& x);  // Q = (x,x)/2

// dual classes G^{-1} Z^3 mod Z^3 with entries in [0,1), sorted
// lexicographically; size |det G|
std::vector<Vec3Q> dual_classes(const Sig21Lattice& lat);

// two-sided indefinite theta value at tau, component h: the signed kernel
// (sgn(X,c1) - sgn(X,c2))/2 e(Q(X) tau) over nonnegative norms, plus the
// erfc tail of each negative-norm side c and the exact sawtooth constant of
// each isotropic side, summed over the coordinate box |n_i| <= cutoff.
// Sides must satisfy (c,c) < 0 or be isotropic and nonzero; two negative
// sides must pair negatively.  boundary_hits counts positive-norm lattice
// points pairing to zero with a side (their kernel uses sgn(0) = 0).
Cplx indefinite_theta(const Sig21Lattice& lat, const Vec3& c1, const Vec3& c2,
                      const Vec3Q& h, Cplx tau, i64 cutoff,
                      i64* boundary_hits = nullptr);
// exact coefficient of q^m of the holomorphic part (pure signed kernel)
Rational indefinite_theta_coeff(const Sig21Lattice& lat, const Vec3& c1,
                                const Vec3& c2, const Vec3Q& h,
                                const Rational& m, i64 cutoff);

// --- order-three mock theta expansions (exact) ------------------------------

// two independent summation strategies for the same series: term-wise exact
// division by the built-up product, or multiplication of the closed-form
// geometric expansions of each reciprocal factor
enum class SumRoute { division, geometric };

// sum_{n >= 0} q^{n^2} / prod_{k=1}^{n} (1 + q^k)^2, exact to q^(n_terms-1)
IntSeries mock_theta_f(int n_terms, SumRoute route = SumRoute::division);
// sum_{n >= 0} q^{2n^2+2n} / prod_{k=1}^{n+1} (1 - q^{2k-1})^2
IntSeries mock_theta_omega(int n_terms, SumRoute route = SumRoute::division);

// --- the index-two sublattice block over the denominator-24 grid ------------

struct MockBlock {
  // q^{-1/24} f(q), 2 q^{1/3} w(q^{1/2}), 2 q^{1/3} w(-q^{1/2})
  std::array<GridSeries, 3> f_vec;
  // the twelve-component completion vector assembled from f_vec
  std::array<GridSeries, 12> completion;
  // odd rank-one theta sum_{x in Z + a/12} x q^{6x^2} (without the common
  // scale -2 sqrt 6)
  std::array<GridSeries, 12> odd_theta;
  std::array<GridSeries, 4> even_theta_8;   // sum q^{2x^2}, x in Z + b/4
  std::array<GridSeries, 6> even_theta_12;  // sum q^{3x^2}, x in Z + c/6
  // target classes (h0, h1, h2) in Z/2 x Z/6 x Z/6, index h0*36 + h1*6 + h2
  std::vector<std::array<i64, 3>> classes;
  // preimage triples (a, b, c) in Z/12 x Z/4 x Z/6 of each class
  std::vector<std::vector<std::array<i64, 3>>> fibers;
  // per class: sum over its fiber of completion[a] even_theta_8[b]
  // even_theta_12[c] on the common grid
  std::vector<GridSeries> combination;
  std::vector<std::optional<Rational>> min_exponent;  // of each combination
};

// projection (a/12, b/4, c/6) -> (3a.. + b.., a.. + b.., c..) of the
// sublattice classes onto the target classes; defined when a = b mod 2
std::array<i64, 3> block_projection(const std::array<i64, 3>& mu);

// assemble the block exactly to grid exponent n_terms/24; n_terms >= 24
MockBlock mock_block(int n_terms);

}  // namespace wind
