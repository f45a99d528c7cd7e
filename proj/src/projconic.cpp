#include "conic/projconic.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace conic::geom {

Triple canonical(const gf::Field& F, Triple t) {
  for (std::size_t i = 0; i < 3; ++i) {
    if (t[i].index == 0) continue;
    const Elem s = F.inv(t[i]);
    for (auto& c : t) c = F.mul(c, s);
    return t;
  }
  throw std::invalid_argument("zero triple is not a projective point");
}

int sign(LineType t) {
  switch (t) {
    case LineType::hyperbolic:
      return 1;
    case LineType::elliptic:
      return -1;
    default:
      return 0;
  }
}

const char* to_string(LineType t) {
  switch (t) {
    case LineType::hyperbolic:
      return "hyperbolic";
    case LineType::elliptic:
      return "elliptic";
    default:
      return "tangent";
  }
}

std::uint64_t LineSet::key(const Triple& t) const {
  return (static_cast<std::uint64_t>(t[0].index) * q + t[1].index) * q + t[2].index;
}

Conic::Conic(gf::FieldPtr field)
    : field_(std::move(field)), ext_(gf::Field::extend(field_)), classes_(gf::classes(field_)) {}

Triple Conic::lift(const Triple& t) const {
  return {ext_->embed(t[0]), ext_->embed(t[1]), ext_->embed(t[2])};
}

Triple Conic::conic_point(ProjElem t) const {
  const gf::Field& E = *ext_;
  if (t.infinite) return {E.zero(), E.one(), E.zero()};
  return canonical(E, {t.value, E.square(t.value), E.one()});
}

Triple Conic::tangent_line(ProjElem t) const {
  const gf::Field& E = *ext_;
  if (t.infinite) return {E.zero(), E.zero(), E.one()};
  // Gradient of X^2 - YZ at (t, t^2, 1) is (2t, -1, -t^2).
  return canonical(E, {E.neg(E.mul(E.from_int(2), t.value)), E.one(), E.square(t.value)});
}

ProjElem Conic::discriminant(const Triple& l) const {
  const gf::Field& F = *field_;
  const Elem z = l[0], x = l[1], y = l[2];
  if (F.even()) {
    if (z.index == 0) return ProjElem::inf();
    return ProjElem::of(F.div(F.mul(x, y), F.square(z)));
  }
  const Elem d = F.sub(F.square(z), F.mul(F.from_int(4), F.mul(x, y)));
  if (d.index == 0) return ProjElem::inf();
  return ProjElem::of(F.inv(d));
}

LineType Conic::classify(const Triple& l) const {
  if (l[0].index == 0 && l[1].index == 0 && l[2].index == 0)
    throw std::invalid_argument("zero triple is not a line");
  const ProjElem d = discriminant(l);
  if (d.infinite) return LineType::tangent;
  return classes_.in_t0(d.value) ? LineType::hyperbolic : LineType::elliptic;
}

std::array<ProjElem, 2> Conic::intersect(const Triple& l) const {
  if (classify(l) == LineType::tangent) throw std::invalid_argument("tangent line meets the conic once");
  const gf::Field& E = *ext_;
  const Triple m = lift(l);
  const Elem z = m[0], x = m[1], y = m[2];
  std::array<ProjElem, 2> out;
  if (x.index == 0) {
    out = {ProjElem::inf(), ProjElem::of(E.neg(E.div(y, z)))};
  } else {
    const auto roots = E.solve_quadratic(x, z, y);
    if (roots.size() != 2) throw std::logic_error("non-tangent line without two conic points");
    out = {ProjElem::of(roots[0]), ProjElem::of(roots[1])};
  }
  if (out[1] < out[0]) std::swap(out[0], out[1]);
  return out;
}

Line Conic::make_line(const Triple& l) const {
  Line line;
  line.coords = canonical(*field_, l);
  line.type = classify(line.coords);
  if (line.type != LineType::tangent) line.meets = intersect(line.coords);
  return line;
}

LineSet Conic::enumerate_lines() const {
  const gf::Field& F = *field_;
  LineSet ls;
  ls.q = F.order();
  const auto elems = F.elements();
  for (const Elem x : elems)
    for (const Elem y : elems) ls.all.push_back({F.one(), x, y});
  for (const Elem y : elems) ls.all.push_back({F.zero(), F.one(), y});
  ls.all.push_back({F.zero(), F.zero(), F.one()});

  for (const Triple& t : ls.all) {
    if (classify(t) == LineType::tangent) continue;
    const auto pos = static_cast<std::uint32_t>(ls.lines.size());
    ls.lines.push_back(make_line(t));
    ls.index.emplace(ls.key(t), pos);
    (ls.lines.back().type == LineType::hyperbolic ? ls.hyperbolic : ls.elliptic).push_back(pos);
  }
  return ls;
}

bool Conic::is_real(const Triple& t) const {
  const gf::Field& E = *ext_;
  const Triple c = canonical(E, t);
  return std::all_of(c.begin(), c.end(), [&](Elem e) { return E.relative_frobenius(e) == e; });
}

std::vector<ProjElem> Conic::ext_parameters() const {
  std::vector<ProjElem> out;
  for (const Elem e : ext_->elements()) out.push_back(ProjElem::of(e));
  out.push_back(ProjElem::inf());
  return out;
}

std::string lines_csv(const LineSet& ls) {
  std::ostringstream os;
  os << "index,z,x,y,type\n";
  for (std::size_t i = 0; i < ls.lines.size(); ++i) {
    const auto& l = ls.lines[i];
    os << i << ',' << l.coords[0].index << ',' << l.coords[1].index << ',' << l.coords[2].index << ','
       << to_string(l.type) << '\n';
  }
  return os.str();
}

}  // namespace conic::geom
