#include "conic/crossratio.hpp"

#include <stdexcept>

namespace conic::cross {

namespace {

struct Vec2 {
  Elem x0, x1;
};

Vec2 homog(const gf::Field& F, ProjElem a) {
  if (a.infinite) return {F.one(), F.zero()};
  return {a.value, F.one()};
}

Elem det(const gf::Field& F, Vec2 a, Vec2 b) { return F.sub(F.mul(a.x0, b.x1), F.mul(a.x1, b.x0)); }

}  // namespace

ProjElem cross_ratio(const gf::Field& F, ProjElem a, ProjElem b, ProjElem c, ProjElem d) {
  const ProjElem v[4] = {a, b, c, d};
  for (int i = 0; i < 4; ++i) {
    int same = 0;
    for (int j = 0; j < 4; ++j) same += v[i] == v[j];
    if (same >= 3) throw std::invalid_argument("cross-ratio undefined: three equal arguments");
  }
  const Vec2 va = homog(F, a), vb = homog(F, b), vc = homog(F, c), vd = homog(F, d);
  const Elem num = F.mul(det(F, va, vc), det(F, vb, vd));
  const Elem den = F.mul(det(F, va, vd), det(F, vb, vc));
  if (den.index == 0) return ProjElem::inf();
  return ProjElem::of(F.div(num, den));
}

ProjElem inverse(const gf::Field& F, ProjElem x) {
  if (x.infinite) return ProjElem::of(F.zero());
  if (x.value.index == 0) return ProjElem::inf();
  return ProjElem::of(F.inv(x.value));
}

ProjElem f_reduce(const gf::Field& F, ProjElem x) {
  const bool even = F.even();
  const Elem quarter = even ? F.zero() : F.inv(F.from_int(4));
  if (x.infinite || x.value.index == 0) return ProjElem::of(quarter);
  if (x.value == F.one()) return ProjElem::inf();
  const Elem s = F.add(x.value, F.inv(x.value));
  if (even) return ProjElem::of(F.inv(s));
  return ProjElem::of(F.add(quarter, F.inv(F.sub(s, F.from_int(2)))));
}

CrossRatioValue line_cross_ratio(const geom::Conic& C, const geom::Line& l, const geom::Line& m) {
  const gf::Field& E = *C.ext();
  CrossRatioValue v;
  v.value = cross_ratio(E, l.meets[0], l.meets[1], m.meets[0], m.meets[1]);
  v.pair = {v.value, inverse(E, v.value)};
  if (v.pair[1] < v.pair[0]) std::swap(v.pair[0], v.pair[1]);
  return v;
}

bool in_b0(const geom::Conic& C, ProjElem x) {
  if (x.infinite) return true;
  return C.ext()->in_base(x.value) && x.value != C.ext()->one();
}

bool in_b1(const geom::Conic& C, ProjElem x) {
  const gf::Field& E = *C.ext();
  if (x.infinite || x.value.index == 0 || x.value == E.one()) return false;
  return E.relative_frobenius(x.value) == E.inv(x.value);
}

Elem rho_hat_points(const geom::Conic& C, const geom::Line& l, const geom::Line& m) {
  if (l.type == geom::LineType::tangent || m.type == geom::LineType::tangent)
    throw std::invalid_argument("rho_hat needs non-tangent lines");
  if (l.coords == m.coords) throw std::invalid_argument("rho_hat needs distinct lines");
  const gf::Field& E = *C.ext();
  const ProjElem r = cross_ratio(E, l.meets[0], l.meets[1], m.meets[0], m.meets[1]);
  const ProjElem f = f_reduce(E, r);
  if (f.infinite || !E.in_base(f.value)) throw std::logic_error("modified cross-ratio outside F_q");
  return E.to_base(f.value);
}

Elem rho_hat_coords(const geom::Conic& C, const geom::Triple& l, const geom::Triple& m) {
  if (l == m) throw std::invalid_argument("rho_hat needs distinct lines");
  const gf::Field& F = *C.field();
  const Elem z = l[0], x = l[1], y = l[2];
  const Elem zb = m[0], xb = m[1], yb = m[2];
  const Elem cross = F.add(F.mul(x, yb), F.mul(xb, y));
  if (F.even()) {
    if (z.index == 0 || zb.index == 0) throw std::invalid_argument("rho_hat needs non-tangent lines");
    const Elem t = F.add(F.square(cross),
                         F.mul(F.add(F.mul(x, zb), F.mul(xb, z)), F.add(F.mul(y, zb), F.mul(yb, z))));
    return F.div(t, F.square(F.mul(z, zb)));
  }
  const ProjElem d = C.discriminant(l), db = C.discriminant(m);
  if (d.infinite || db.infinite) throw std::invalid_argument("rho_hat needs non-tangent lines");
  const Elem u = F.sub(F.mul(F.from_int(2), cross), F.mul(z, zb));
  return F.div(F.mul(F.square(u), F.mul(d.value, db.value)), F.from_int(4));
}

std::optional<geom::LineType> type_from_rho_hat(const geom::Conic& C, Elem c, geom::LineType type_l) {
  if (!C.even()) throw std::invalid_argument("type_from_rho_hat is defined for even q");
  if (type_l == geom::LineType::tangent) throw std::invalid_argument("tangent line has no relations");
  if (c.index == 0) {
    if (type_l == geom::LineType::hyperbolic) return geom::LineType::hyperbolic;
    return std::nullopt;
  }
  const unsigned e = type_l == geom::LineType::hyperbolic ? 0 : 1;
  const unsigned f = (C.field()->trace_bit(c) + e) & 1;
  return f == 0 ? geom::LineType::hyperbolic : geom::LineType::elliptic;
}

}  // namespace conic::cross
