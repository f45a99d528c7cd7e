#pragma once

// Points and lines of PG(2,q), the conic O_q = {(t, t^2, 1)} u {(0,1,0)},
// its extension over F_{q^2}, and line classification.
//
// A line (z, x, y) is the set of points P with z*P0 + x*P1 + y*P2 = 0, so the
// conic point P_t lies on it iff x t^2 + z t + y = 0.

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "conic/gf.hpp"

namespace conic::geom {

using gf::Elem;
using gf::ProjElem;

using Triple = std::array<Elem, 3>;

/// Scales so that the first nonzero coordinate is 1.  Throws
/// std::invalid_argument on the zero triple.
Triple canonical(const gf::Field& F, Triple t);

enum class LineType : std::uint8_t { tangent, hyperbolic, elliptic };

/// +1 for hyperbolic, -1 for elliptic.
int sign(LineType t);
const char* to_string(LineType t);

struct Line {
  Triple coords;  // canonical (z, x, y) over F_q
  LineType type = LineType::tangent;
  /// Conic intersection {alpha, beta} over F_{q^2}, sorted; equal for tangents.
  std::array<ProjElem, 2> meets{};
};

struct LineSet {
  std::vector<Triple> all;       // every line of PG(2,q)
  std::vector<Line> lines;       // non-tangent lines L, in enumeration order
  std::vector<std::uint32_t> hyperbolic;  // indices into `lines`
  std::vector<std::uint32_t> elliptic;
  std::unordered_map<std::uint64_t, std::uint32_t> index;  // key(coords) -> position in `lines`

  std::uint64_t key(const Triple& t) const;
  std::uint32_t q = 0;
};

/// The conic over F_q together with the quadratic extension used for
/// intersections.
class Conic {
 public:
  explicit Conic(gf::FieldPtr field);

  const gf::FieldPtr& field() const { return field_; }
  const gf::FieldPtr& ext() const { return ext_; }
  const gf::TraceClasses& classes() const { return classes_; }
  std::uint32_t q() const { return field_->order(); }
  bool even() const { return field_->even(); }

  /// P_t over the extension field (t may be any element of F_{q^2} or inf).
  Triple conic_point(ProjElem t) const;
  /// Tangent line at P_t over the extension field.
  Triple tangent_line(ProjElem t) const;

  /// Delta(l): xy/z^2 (q even) or 1/(z^2 - 4xy) (q odd), inf for tangents.
  ProjElem discriminant(const Triple& l) const;
  LineType classify(const Triple& l) const;
  /// The two conic parameters of a non-tangent line; throws
  /// std::invalid_argument for tangents.
  std::array<ProjElem, 2> intersect(const Triple& l) const;
  Line make_line(const Triple& l) const;

  LineSet enumerate_lines() const;

  /// Point or line over F_{q^2} that has a nonzero multiple over F_q.
  bool is_real(const Triple& t) const;
  /// Embeds an F_q triple into F_{q^2}.
  Triple lift(const Triple& t) const;

  /// Points of O_{q^2} in parameter order (finite values, then inf).
  std::vector<ProjElem> ext_parameters() const;

 private:
  gf::FieldPtr field_, ext_;
  gf::TraceClasses classes_;
};

/// Writes the line list as CSV rows "index,z,x,y,type".
std::string lines_csv(const LineSet& ls);

}  // namespace conic::geom
