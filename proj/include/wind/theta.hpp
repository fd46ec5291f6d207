#pragma once
// Special functions (erfc, the sawtooth B1, the incomplete-gamma kernel g and
// its periodization G), the unary theta series attached to a cusp class, the
// Siegel indefinite theta sum, the erfc/Gaussian coefficient tables of the
// nonholomorphic completion and its lowered image, and the singular Schwartz
// function psi~ with its level-group orbit sums.

#include <map>

#include "wind/arith.hpp"
#include "wind/hyperbolic.hpp"
#include "wind/modfun.hpp"
#include "wind/qforms.hpp"
#include "wind/weil.hpp"

namespace wind {

// complementary error function on the real line; power series for small
// argument, Lentz continued fraction for large, ~1e-15 relative
Real erfc(Real t);

// odd 1-periodic sawtooth x - (ceil(x)+floor(x))/2, zero at integers and
// half-integers
Rational B1(const Rational& x);
Real B1(Real x);

// g(w; kappa, s) for s in {0, 1/2}:
//   s = 0:   sgn(w)/2 * erfc(sqrt(pi kappa)|w|)
//   s = 1/2: exp(-pi w^2 kappa)/(2 pi w)
// kappa must be positive and w nonzero
Real g_fun(Real w, Real kappa, const Rational& s);

enum class GSide { direct, fourier };

// periodization G(x; kappa, 0): either the lattice sum of g(x+n; kappa, 0)
// (direct) or -B1(x) + i sum_{m != 0} g(m, 1/kappa, 1/2) e(mx) (fourier);
// 1-periodic, real; x must not be an integer
Real periodic_G(Real x, Real kappa, GSide side);

// unary theta table attached to a cusp class of the level group carried by
// dform (one cyclic factor of order 2N).  Component h, exponent key d = 4Nm
// = k^2 over the vectors orthogonal to the line.  The primary route sums the
// stabilizer-orbit census with orientation signs; the window route sums the
// quotient-lattice representatives with their pairing amplitudes.  The two
// tables coincide.
VVSeries unary_theta_ell(const CuspData& cusp, const DiscriminantForm& dform,
                         i64 d_max);
VVSeries unary_theta_ell_window(const CuspData& cusp,
                                const DiscriminantForm& dform, i64 d_max);

// evaluate a vector-valued table at tau: component h is
// sum_d coeff(v) e(d tau / 4N)
VVVector vvseries_eval(const VVSeries& s, Cplx tau);

// Siegel theta sum over integer triples [A,B,C] of positive discriminant in
// the box max(|A|,|B|,|C|) <= cutoff, genus-character weighted:
// (1/sqrt|Delta|) sum chi([A,B,C]) (A+C) q^{-(B^2-4AC)/|Delta|}
//                     e^{-4 pi v (B^2+(A-C)^2)/|Delta|}.
// The triples of discriminant <= 0 are excluded: their shells do not cancel
// (the isotropic shell alone is ~0.035 at tau = i for Delta = -3) and the
// lowered completion below has no terms matching them.
Cplx siegel_theta_Delta(i64 delta, Cplx tau, i64 cutoff);

// scalar coefficient table of the completion/lowered series for the level-one
// logarithmic form family: term d carries a CoeffFn of v, plus an exact
// sawtooth constant (completion only)
struct ThetaTable {
  i64 delta = -3;
  i64 r = 1;
  i64 level = 1;
  int eta_sign = 1;              // residue at the interior point class
  std::map<i64, CoeffFn> terms;  // d > 0 with |delta| d = 0, 1 mod 4
  Rational constant;
};

// erfc-shaped completion table: for each d the sum over forms of discriminant
// |delta| d of r_zeta chi sgn(d(X,i))/2 erfc(sqrt(4 pi v/|delta|)|d(X,i)|),
// organized by |A+C|; constant = cusp sawtooth sum (exact).  Level 1 only.
ThetaTable theta_star(i64 delta, i64 r, i64 N, const ThirdKindForm& eta,
                      i64 d_max);
// Gaussian-shaped lowered table: -sqrt(v^3/|delta|) r_zeta chi d(X,i)
// e^{-4 pi v d(X,i)^2/|delta|} per d.  Level 1 only.
ThetaTable theta_lower(i64 delta, i64 r, i64 N, const ThirdKindForm& eta,
                       i64 d_max);

// sum_d coeff_d(v) e(d tau) + constant
Cplx table_eval(const ThetaTable& t, Cplx tau);

// image of one coefficient function under the lowering operator
// -2iv^2 d/d(conj tau) applied to coeff(v) e(d tau): constants die,
// s erfc(a sqrt v)/2 -> -(s a / 2 sqrt pi) v^{3/2} e^{-a^2 v}.  Gaussian
// input is outside the closed family and raises a domain error.
CoeffFn lower_coeff_fn(const CoeffFn& c);

// singular Schwartz value -sgn((X,X(z)))/2 erfc(sqrt(pi v)|(X,X(z))|) with
// (X, X(z)) = dpar(f, z)/sqrt(N); zero exactly on the geodesic of f
Real psi_tilde(const QuadForm& f, Cplx z, Real v);

// sum of psi~ over the level-group orbit of f restricted to the window
// |dpar(., z)| <= R; enumerates all forms of the discriminant of f meeting
// the window and filters by orbit membership
Real psi_orbit_sum(const QuadForm& f, i64 N, Cplx z, Real v, Real R);

}  // namespace wind
