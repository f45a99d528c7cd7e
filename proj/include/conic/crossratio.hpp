#pragma once

// Cross-ratio on PG(1,F), the pair-collapsing map f, and the modified
// cross-ratio of two non-tangent lines.

#include <array>
#include <optional>

#include "conic/gf.hpp"
#include "conic/projconic.hpp"

namespace conic::cross {

using gf::Elem;
using gf::ProjElem;

/// rho(a,b,c,d) = (a-c)(b-d) / ((a-d)(b-c)), evaluated as the PG(1) point
/// (det(a,c) det(b,d) : det(a,d) det(b,c)).  Throws std::invalid_argument when
/// three or more arguments coincide.
ProjElem cross_ratio(const gf::Field& F, ProjElem a, ProjElem b, ProjElem c, ProjElem d);

ProjElem inverse(const gf::Field& F, ProjElem x);

/// f(x) = 1/(x + 1/x) for q even, 1/4 + 1/(x - 2 + 1/x) for q odd, with
/// f(1) = inf and f(0) = f(inf) = 0 resp. 1/4.  `F` is the field the value
/// lives in.
ProjElem f_reduce(const gf::Field& F, ProjElem x);

/// Cross-ratio of two lines: a representative r and the unordered pair
/// {r, 1/r} ordered by the element order.
struct CrossRatioValue {
  ProjElem value;
  std::array<ProjElem, 2> pair;
};

CrossRatioValue line_cross_ratio(const geom::Conic& C, const geom::Line& l, const geom::Line& m);

/// B_0 = (F_q u {inf}) \ {1};  B_1 = {x in F_{q^2} \ {1} : x^q = 1/x}.
bool in_b0(const geom::Conic& C, ProjElem x);
bool in_b1(const geom::Conic& C, ProjElem x);

/// f(rho(alpha, beta, gamma, delta)) from the cached conic intersections,
/// mapped back into F_q.  Throws std::invalid_argument for equal or tangent
/// lines.
Elem rho_hat_points(const geom::Conic& C, const geom::Line& l, const geom::Line& m);

/// The same invariant evaluated directly from homogeneous coordinates.
Elem rho_hat_coords(const geom::Conic& C, const geom::Triple& l, const geom::Triple& m);

/// Line type forced on m by rho_hat(l, m) = c; q even only.  Returns nullopt
/// when no line m of any type is compatible (c = 0 with l elliptic).
std::optional<geom::LineType> type_from_rho_hat(const geom::Conic& C, Elem c, geom::LineType type_l);

}  // namespace conic::cross
