#pragma once
// Evaluation of the level-one functions j and dj/dz, and of the logarithmic
// differential g(z) dz = dlog(j - 1728), from cached exact q-expansions with
// certified truncation tails.  All evaluators reduce the argument into the
// standard fundamental domain first, so the series only ever runs at
// Im z >= sqrt(3)/2.

#include <map>
#include <stdexcept>
#include <string>

#include "wind/arith.hpp"

namespace wind {

// thrown when an evaluation point is too close to a pole of the integrand
struct pole_error : std::runtime_error {
  explicit pole_error(const std::string& what) : std::runtime_error(what) {}
};

// sign * dlog(j - 1728); its residues live on the points [i] and [oo]
struct ThirdKindForm {
  int sign = +1;
};

// {"i": sign, "oo": -sign}; the two entries sum to zero
std::map<std::string, Rational> residue_divisor(const ThirdKindForm& form);

// j(z), certified absolute error <= tol; throws precision_error when the
// cached expansion plus double rounding cannot reach tol at this point
Cplx eval_j(Cplx z, Real tol);
// dj/dz via the weight-two chain rule through the reducing matrix
Cplx eval_jprime(Cplx z, Real tol);
// g(z) = j'(z)/(j(z) - 1728); throws pole_error within 1e-6 of the orbit of i
Cplx eval_eta_jlog(Cplx z, Real tol);
// form.sign * eval_eta_jlog(z, tol)
Cplx eval_form(const ThirdKindForm& form, Cplx z, Real tol);

// best-effort j(z) at full cached order with no certification; meant for
// winding-number contours where only relative accuracy matters
Cplx eval_j_raw(Cplx z);

}  // namespace wind
