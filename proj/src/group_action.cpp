#include "conic/group_action.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "conic/crossratio.hpp"

namespace conic::group {

namespace {

template <std::size_t N>
std::array<Elem, N> scale_first(const gf::Field& F, std::array<Elem, N> m) {
  for (const Elem e : m) {
    if (e.index == 0) continue;
    const Elem s = F.inv(e);
    for (auto& x : m) x = F.mul(x, s);
    return m;
  }
  throw std::invalid_argument("zero matrix");
}

Elem det2(const gf::Field& F, const Pgl2& A) {
  return F.sub(F.mul(A.m[0], A.m[3]), F.mul(A.m[1], A.m[2]));
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::uint32_t> parent_;
};

std::uint8_t fibre_of(const geom::Line& l) { return l.type == geom::LineType::hyperbolic ? 0 : 1; }

cc::CoherentConfiguration empty_config(const geom::LineSet& ls) {
  cc::CoherentConfiguration out;
  out.n = static_cast<std::uint32_t>(ls.lines.size());
  out.fibre_sign = {1, -1};
  for (const auto& l : ls.lines) out.fibre.push_back(fibre_of(l));
  out.rel.assign(static_cast<std::size_t>(out.n) * out.n, 0);
  return out;
}

const char* sign_name(std::uint8_t f) { return f == 0 ? "+" : "-"; }

}  // namespace

Pgl2 canonical(const gf::Field& F, Pgl2 A) {
  if (det2(F, A).index == 0) throw std::invalid_argument("singular 2x2 matrix");
  A.m = scale_first(F, A.m);
  return A;
}

Mat3 canonical(const gf::Field& F, Mat3 M) { return scale_first(F, M); }

Pgl2 identity(const gf::Field& F) { return {{F.one(), F.zero(), F.zero(), F.one()}}; }

Pgl2 compose(const gf::Field& F, const Pgl2& A, const Pgl2& B) {
  const auto& a = A.m;
  const auto& b = B.m;
  Pgl2 C{{F.add(F.mul(a[0], b[0]), F.mul(a[1], b[2])), F.add(F.mul(a[0], b[1]), F.mul(a[1], b[3])),
          F.add(F.mul(a[2], b[0]), F.mul(a[3], b[2])), F.add(F.mul(a[2], b[1]), F.mul(a[3], b[3]))}};
  return canonical(F, C);
}

Pgl2 lift(const gf::Field& ext, const Pgl2& A) {
  Pgl2 B;
  for (std::size_t i = 0; i < 4; ++i) B.m[i] = ext.embed(A.m[i]);
  return B;
}

ProjElem apply_moebius(const gf::Field& F, const Pgl2& A, ProjElem x) {
  const auto& [a, b, c, d] = A.m;
  Elem num, den;
  if (x.infinite) {
    num = a;
    den = c;
  } else {
    num = F.add(F.mul(a, x.value), b);
    den = F.add(F.mul(c, x.value), d);
  }
  if (den.index == 0) return ProjElem::inf();
  return ProjElem::of(F.div(num, den));
}

Mat3 embed_pgl3(const gf::Field& F, const Pgl2& A) {
  const auto& [a, b, c, d] = A.m;
  const Elem two = F.from_int(2);
  Mat3 M{F.add(F.mul(a, d), F.mul(b, c)), F.mul(a, c),  F.mul(b, d),
         F.mul(two, F.mul(a, b)),         F.square(a), F.square(b),
         F.mul(two, F.mul(c, d)),         F.square(c), F.square(d)};
  return canonical(F, M);
}

geom::Triple apply_point(const gf::Field& F, const Mat3& M, const geom::Triple& p) {
  geom::Triple out;
  for (std::size_t i = 0; i < 3; ++i) {
    Elem s = F.zero();
    for (std::size_t j = 0; j < 3; ++j) s = F.add(s, F.mul(M[3 * i + j], p[j]));
    out[i] = s;
  }
  return geom::canonical(F, out);
}

Mat3 inverse(const gf::Field& F, const Mat3& M) {
  auto at = [&](int i, int j) { return M[3 * i + j]; };
  auto minor = [&](int i0, int i1, int j0, int j1) {
    return F.sub(F.mul(at(i0, j0), at(i1, j1)), F.mul(at(i0, j1), at(i1, j0)));
  };
  Mat3 adj{minor(1, 2, 1, 2),         F.neg(minor(0, 2, 1, 2)), minor(0, 1, 1, 2),
           F.neg(minor(1, 2, 0, 2)), minor(0, 2, 0, 2),         F.neg(minor(0, 1, 0, 2)),
           minor(1, 2, 0, 1),         F.neg(minor(0, 2, 0, 1)), minor(0, 1, 0, 1)};
  Elem det = F.zero();
  for (int j = 0; j < 3; ++j) det = F.add(det, F.mul(at(0, j), adj[3 * j]));
  if (det.index == 0) throw std::invalid_argument("singular 3x3 matrix");
  const Elem s = F.inv(det);
  for (auto& x : adj) x = F.mul(x, s);
  return adj;
}

geom::Triple apply_line(const gf::Field& F, const Mat3& M, const geom::Triple& l) {
  const Mat3 inv = inverse(F, M);
  geom::Triple out;
  for (std::size_t j = 0; j < 3; ++j) {
    Elem s = F.zero();
    for (std::size_t i = 0; i < 3; ++i) s = F.add(s, F.mul(l[i], inv[3 * i + j]));
    out[j] = s;
  }
  return geom::canonical(F, out);
}

std::vector<Pgl2> enumerate_group(const gf::Field& F, std::uint32_t bound) {
  if (F.order() > bound) throw std::invalid_argument("field order exceeds the group enumeration bound");
  std::vector<Pgl2> out;
  const auto E = F.elements();
  for (const Elem a : E)
    for (const Elem b : E)
      for (const Elem c : E)
        for (const Elem d : E) {
          const Pgl2 A{{a, b, c, d}};
          if (det2(F, A).index == 0) continue;
          const Elem first = a.index ? a : b.index ? b : c;
          if (first != F.one()) continue;
          out.push_back(A);
        }
  return out;
}

std::vector<Pgl2> generators(const gf::Field& F) {
  return {Pgl2{{F.one(), F.one(), F.zero(), F.one()}}, canonical(F, Pgl2{{F.primitive(), F.zero(), F.zero(), F.one()}}),
          Pgl2{{F.zero(), F.one(), F.one(), F.zero()}}};
}

std::vector<std::uint32_t> line_permutation(const geom::Conic& C, const geom::LineSet& ls, const Pgl2& A) {
  const gf::Field& F = *C.field();
  const Mat3 M = embed_pgl3(F, A);
  std::vector<std::uint32_t> perm(ls.lines.size());
  for (std::size_t i = 0; i < ls.lines.size(); ++i) {
    const auto it = ls.index.find(ls.key(apply_line(F, M, ls.lines[i].coords)));
    if (it == ls.index.end()) throw std::logic_error("group element maps a secant or exterior line to a tangent");
    perm[i] = it->second;
  }
  return perm;
}

cc::CoherentConfiguration build_cc_orbit(const geom::Conic& C, const geom::LineSet& ls, std::uint32_t bound) {
  if (C.q() > bound) throw std::invalid_argument("orbit construction is limited to q <= " + std::to_string(bound));
  auto out = empty_config(ls);
  const std::uint32_t n = out.n;
  UnionFind uf(static_cast<std::size_t>(n) * n);
  for (const auto& g : generators(*C.field())) {
    const auto perm = line_permutation(C, ls, g);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < n; ++j) uf.unite(i * n + j, perm[i] * n + perm[j]);
  }
  std::vector<int> id(static_cast<std::size_t>(n) * n, -1);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      const std::uint32_t root = uf.find(i * n + j);
      if (id[root] < 0) {
        id[root] = static_cast<int>(out.relations.size());
        cc::Relation R;
        R.diagonal = i == j;
        R.tag = id[root];
        R.row_fibre = out.fibre[i];
        R.col_fibre = out.fibre[j];
        R.name = "O" + std::to_string(id[root]) + "(" + sign_name(R.row_fibre) + "," + sign_name(R.col_fibre) + ")";
        out.relations.push_back(R);
      }
      out.rel[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint16_t>(id[root]);
    }
  out.recount();
  out.variant = "full";
  return out;
}

cc::CoherentConfiguration build_cc_formula(const geom::Conic& C, const geom::LineSet& ls) {
  const gf::Field& F = *C.field();
  const std::uint32_t q = F.order();
  auto out = empty_config(ls);
  const std::uint32_t n = out.n;
  // Provisional key: 0/1 for the diagonals, 2 + (row*2 + col)*q + label otherwise.
  const std::size_t keys = 2 + 4 * static_cast<std::size_t>(q);
  if (keys > 65535) throw std::invalid_argument("field too large for 16-bit relation ids");
  std::vector<char> used(keys, 0);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      std::size_t key;
      if (i == j) {
        key = out.fibre[i];
      } else {
        const Elem c = cross::rho_hat_coords(C, ls.lines[i].coords, ls.lines[j].coords);
        key = 2 + (out.fibre[i] * 2 + out.fibre[j]) * static_cast<std::size_t>(q) + c.index;
      }
      used[key] = 1;
      out.rel[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint16_t>(key);
    }
  std::vector<std::uint16_t> id(keys, 0);
  for (std::size_t key = 0; key < keys; ++key) {
    if (!used[key]) continue;
    id[key] = static_cast<std::uint16_t>(out.relations.size());
    cc::Relation R;
    if (key < 2) {
      R.diagonal = true;
      R.row_fibre = R.col_fibre = static_cast<std::uint8_t>(key);
      R.name = std::string("diag(") + sign_name(R.row_fibre) + ")";
    } else {
      const std::size_t pair = (key - 2) / q;
      const Elem label = F.element(static_cast<std::uint32_t>((key - 2) % q));
      R.label = label;
      R.row_fibre = static_cast<std::uint8_t>(pair / 2);
      R.col_fibre = static_cast<std::uint8_t>(pair % 2);
      R.name = "R[" + F.to_string(label) + "](" + sign_name(R.row_fibre) + "," + sign_name(R.col_fibre) + ")";
    }
    out.relations.push_back(R);
  }
  for (auto& r : out.rel) r = id[r];
  out.recount();
  out.variant = "full";
  return out;
}

}  // namespace conic::group
