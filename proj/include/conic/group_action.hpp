#pragma once

// PGL(2,q) acting on PG(1, q^m) by Moebius maps and on PG(2,q) through the
// embedding into PGL(3,q) that fixes the conic; the conic configuration
// built from orbits and from modified cross-ratio labels.

#include <array>
#include <cstdint>
#include <vector>

#include "conic/coherent.hpp"
#include "conic/projconic.hpp"

namespace conic::group {

using gf::Elem;
using gf::ProjElem;

/// Matrix (a b; c d) acting as x -> (a x + b) / (c x + d).
struct Pgl2 {
  std::array<Elem, 4> m;  // a, b, c, d

  friend bool operator==(const Pgl2&, const Pgl2&) = default;
};

using Mat3 = std::array<Elem, 9>;  // row-major

/// Scales so that the first nonzero entry is 1.  Throws std::invalid_argument
/// for a singular matrix.
Pgl2 canonical(const gf::Field& F, Pgl2 A);
Mat3 canonical(const gf::Field& F, Mat3 M);

Pgl2 identity(const gf::Field& F);
Pgl2 compose(const gf::Field& F, const Pgl2& A, const Pgl2& B);  // A after B

/// Entries of A (over a subfield) lifted into the tower step `ext`.
Pgl2 lift(const gf::Field& ext, const Pgl2& A);

ProjElem apply_moebius(const gf::Field& F, const Pgl2& A, ProjElem x);

/// Image of A under x -> (ad+bc, ac, bd; 2ab, a^2, b^2; 2cd, c^2, d^2),
/// canonicalized.
Mat3 embed_pgl3(const gf::Field& F, const Pgl2& A);

geom::Triple apply_point(const gf::Field& F, const Mat3& M, const geom::Triple& p);
/// Line l mapped to l * M^{-1}, canonicalized, so that incidence is preserved.
geom::Triple apply_line(const gf::Field& F, const Mat3& M, const geom::Triple& l);
Mat3 inverse(const gf::Field& F, const Mat3& M);

/// All q^3 - q canonical elements in lexicographic order.  Throws
/// std::invalid_argument when q exceeds `bound`.
std::vector<Pgl2> enumerate_group(const gf::Field& F, std::uint32_t bound = 16);

/// x -> x + 1, x -> delta x (delta primitive), x -> 1/x.
std::vector<Pgl2> generators(const gf::Field& F);

/// Permutation of ls.lines induced by A.
std::vector<std::uint32_t> line_permutation(const geom::Conic& C, const geom::LineSet& ls, const Pgl2& A);

/// Orbits of the group on ordered pairs of non-tangent lines by union-find
/// closure under the generators.  Relations are orbits, ordered by first
/// occurrence in row-major order; no labels are attached.
cc::CoherentConfiguration build_cc_orbit(const geom::Conic& C, const geom::LineSet& ls,
                                         std::uint32_t bound = 16);

/// Pairs labelled by (type l, type m, rho_hat(l, m)) with the diagonal split
/// by fibre.  Relation order: diagonal of each fibre, then labeled relations
/// by (row fibre, column fibre, label).
cc::CoherentConfiguration build_cc_formula(const geom::Conic& C, const geom::LineSet& ls);

}  // namespace conic::group
