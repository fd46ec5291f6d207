#pragma once
// Regularized cycle integrals of the third-kind form along geodesics of
// indefinite forms, winding numbers by continuous argument tracking, twisted
// traces, and the generating table of traces with its JSON projection.

#include <map>
#include <string>
#include <vector>

#include "wind/hyperbolic.hpp"
#include "wind/modfun.hpp"
#include "wind/qforms.hpp"

namespace wind {

// one principal-value record at a pole crossing of the path: the pole is
// bypassed on a small circle on both sides and the two detours averaged.
// upper - lower is a full counterclockwise loop, so it equals 2 pi i times
// the residue at the recorded point.
struct PVCorrection {
  Cplx point;  // pole location in the upper half-plane
  Cplx upper;  // integral over the counterclockwise detour arc
  Cplx lower;  // integral over the clockwise detour arc
};

struct CycleIntegralResult {
  Cplx value = Cplx(0, 0);
  std::string method;  // "quadrature" or "argument_tracking"
  std::vector<PVCorrection> pv_corrections;
  // rational coefficient of log(eps) removed by the regularization of a
  // cusp-to-cusp geodesic, in units of 2 pi i; zero for closed cycles
  Rational split_log_coefficient;
};

// regularized integral along the cycle of f at level N.  Closed cycles are
// integrated by adaptive quadrature from a base point to its image under the
// stabilizer generator, with poles on the path handled by two-sided detour
// averaging.  Cusp-to-cusp cycles are truncated at matched horoball heights
// eps = base^{-k} and extrapolated, after removing the logarithmic term.
CycleIntegralResult cycle_integral(const ThirdKindForm& eta, const QuadForm& f,
                                   i64 N, Real tol);
// same, with the regularization ladder eps = base^{-k} made explicit
// (split geodesics only; the default integral uses base 2)
CycleIntegralResult cycle_integral_ladder(const ThirdKindForm& eta,
                                          const QuadForm& f, i64 N, Real tol,
                                          i64 base);
// same, with the base point of a closed cycle pinned at the given arc angle
CycleIntegralResult cycle_integral_at(const ThirdKindForm& eta,
                                      const QuadForm& f, i64 N, Real tol,
                                      Real base_angle);

// winding of j - 1728 along the closed cycle of a non-split form, by
// continuous argument tracking with two-sided deformation averaging at
// crossings of the elliptic orbit; values lie in (1/2) Z
Real winding_index(const QuadForm& f, Real tol);
// argument-tracking analogue along the cusp-to-cusp geodesic of a split
// form; the argument of j - 1728 converges at both ends
Real winding_index_line(const QuadForm& f, i64 N, Real tol);

// exact value of the twisted character sum sum_{C mod |delta|}
// (delta | C) B1(-C/|delta|)
Rational L0(i64 delta);

// twisted trace of index d: sum over level classes of discriminant -d delta
// of chi * cycle_integral / (2 pi i)
Real trace(i64 delta, i64 r, i64 N, i64 d, const ThirdKindForm& eta, Real tol);
// the same sum with every term replaced by the argument-tracking index
// (level one only); an independent oracle for the quadrature route
Real trace_index_route(i64 delta, i64 r, i64 d, Real tol);

struct TraceClassEntry {
  QuadForm form;
  int chi = 0;
  Real ind = 0;  // argument-tracking index of the class
};

struct TraceEntry {
  Real value = 0;
  std::vector<TraceClassEntry> classes;
};

struct TraceTable {
  i64 delta = -3;
  i64 level = 1;
  Rational constant;  // exact constant term of the generating series
  std::map<i64, TraceEntry> entries;
};

// trace table for all admissible exponents d <= d_max (d = 0, 3 mod 4 with
// nonempty class sets); constant term L0(delta) at level one
TraceTable generating_series(i64 delta, i64 r, i64 N, const ThirdKindForm& eta,
                             i64 d_max, Real tol);

std::string trace_table_json(const TraceTable& t);

}  // namespace wind
