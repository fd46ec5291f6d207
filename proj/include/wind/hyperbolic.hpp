#pragma once
// Upper half-plane geometry attached to forms of positive discriminant:
// oriented geodesics, the distance parameter d(f, z), reduction into the
// standard fundamental domain, and cusp data for the level group.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "wind/arith.hpp"
#include "wind/qforms.hpp"

namespace wind {

// point of P^1(Q) as a primitive integer pair (p : q), q >= 0, infinity = (1 : 0)
struct CuspPoint {
  i64 p = 1, q = 0;
  friend bool operator==(const CuspPoint&, const CuspPoint&) = default;
  std::string str() const;
};
CuspPoint normalize_cusp(i64 p, i64 q);
// some unimodular matrix with first column (p, q)
Mat2 cusp_section(const CuspPoint& l);

struct GeodesicArc {
  QuadForm form;
  bool vertical = false;
  Rational center;      // circle center, or the real coordinate if vertical
  Real radius = 0;      // sqrt(D)/(2|A|); 0 when vertical
  int orientation = 1;  // +1 iff A > 0 for circles; +1 iff upward (B < 0) for lines
  bool split = false;
  Cplx base_point;                 // a point on the arc
  std::optional<Mat2> stabilizer;  // arc generator for closed geodesics
  CuspPoint end_to, end_from;      // endpoints when split: arc runs end_from -> end_to
};

// pre: disc(f) > 0
GeodesicArc geodesic(const QuadForm& f);

// (a|z|^2 + b Re z + c)/Im z: vanishes exactly on the geodesic of f.
// Equivariant: dpar(g.f, z) = dpar(f, gz) for unimodular g.
Real dpar(const QuadForm& f, Cplx z);

// reduce z into {|Re| <= 1/2, |z| >= 1}; returns (z', g) with z' = g z
std::pair<Cplx, Mat2> reduce_to_F(Cplx z);

struct CuspData {
  CuspPoint line;                   // representative of the cusp class
  Mat2 sigma;                       // sigma * infinity = line
  i64 width = 1;                    // least a > 0 with sigma T^a sigma^{-1} in the group
  Rational beta;                    // scale of the primitive lattice vector along the line
  Rational eps;                     // width/beta
  std::map<i64, Rational> h_offsets;  // h in Z/2N -> offset in [0, beta); absent if empty
};

// cusp data for one explicit boundary point at level N (class invariants)
CuspData cusp_data_for(const CuspPoint& l, i64 N);
// complete set of inequivalent cusps of the level group, infinity first
std::vector<CuspData> cusp_classes(i64 N);
// group element moving cusp a to cusp b, if the two are equivalent at level N
std::optional<Mat2> cusp_transporter(const CuspPoint& a, const CuspPoint& b, i64 N);

// for split f: sigma with sigma{Re z = r} = geodesic(f) oriented into
// sigma(infinity), r unique in [-width/2, width/2) once sigma is pinned to the
// stored cusp class section; returns (r, sigma)
std::pair<Rational, Mat2> split_real_part(const QuadForm& f);

}  // namespace wind
