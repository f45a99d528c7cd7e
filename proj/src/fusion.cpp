#include "conic/fusion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace conic::fusion {

namespace {

const char* sign_name(std::uint8_t f) { return f == 0 ? "+" : "-"; }

std::int64_t half(std::int64_t x) {
  if (x % 2 != 0) throw std::logic_error("table formula is not integral at this q");
  return x / 2;
}

std::int64_t delta(std::int64_t e) { return e == 1 ? 1 : 0; }

using Formula = std::function<std::int64_t(std::int64_t q, std::int64_t e)>;

struct Cell {
  int i, j;
  std::string formula;
  Formula f;
};

// Adds (i, j) and, when i != j, the mirrored (j, i) entry.
void sym(std::vector<Cell>& cells, int i, int j, std::string formula, Formula f) {
  cells.push_back({i, j, formula, f});
  if (i != j) cells.push_back({j, i, std::move(formula), std::move(f)});
}

FusedTable make_table(std::string name, int k, std::vector<int> classes, const std::vector<Cell>& cells,
                      std::int64_t q, int eps) {
  FusedTable t;
  t.name = std::move(name);
  t.eps = eps;
  t.k = k;
  t.classes = std::move(classes);
  for (const int i : t.classes)
    for (const int j : t.classes) {
      TableEntry e{k, i, j, "0", 0};
      for (const auto& c : cells)
        if (c.i == i && c.j == j) {
          e.formula = c.formula;
          e.value = c.f(q, eps);
        }
      t.entries.push_back(e);
    }
  return t;
}

Formula v_of(int cls, bool flip) {
  return [cls, flip](std::int64_t q, std::int64_t e) { return fused_valency(cls, static_cast<int>(flip ? -e : e), q); };
}

std::string v_name(int cls, bool flip) {
  std::string s;
  if (cls == kClass12)
    s = "v1+v2";
  else
    s = "v" + std::to_string(cls);
  return s + (flip ? "(-eps)" : "(eps)");
}

void add_v5(std::vector<Cell>& cells) { cells.push_back({5, 5, "v5(eps)", v_of(5, false)}); }

// Table for the class-5 reference pair: only mixed compositions survive.
std::vector<Cell> mixed_cells(const std::vector<int>& same) {
  std::vector<Cell> cells;
  for (const int c : same) {
    cells.push_back({c, 5, v_name(c, false), v_of(c, false)});
    cells.push_back({5, c, v_name(c, true), v_of(c, true)});
  }
  return cells;
}

}  // namespace

cc::CoherentConfiguration apply_fusion(const cc::CoherentConfiguration& src, const FusionMap& fm) {
  if (fm.class_of.size() != src.relations.size()) throw std::invalid_argument("fusion map has the wrong size");
  std::map<int, std::size_t> order;
  for (std::size_t i = 0; i < fm.class_names.size(); ++i) order[fm.class_names[i].first] = i;
  std::map<std::tuple<int, int, std::size_t>, std::vector<std::uint16_t>> groups;
  std::vector<std::uint16_t> diagonals;
  for (std::size_t r = 0; r < src.relations.size(); ++r) {
    const auto& R = src.relations[r];
    if (R.diagonal) {
      diagonals.push_back(static_cast<std::uint16_t>(r));
      continue;
    }
    const auto it = order.find(fm.class_of[r]);
    if (it == order.end()) throw std::invalid_argument("relation mapped to an unnamed class");
    groups[{R.row_fibre, R.col_fibre, it->second}].push_back(static_cast<std::uint16_t>(r));
  }
  cc::CoherentConfiguration out;
  out.n = src.n;
  out.fibre = src.fibre;
  out.fibre_sign = src.fibre_sign;
  out.variant = src.variant;
  std::vector<std::uint16_t> remap(src.relations.size());
  for (const auto d : diagonals) {
    remap[d] = static_cast<std::uint16_t>(out.relations.size());
    auto R = src.relations[d];
    R.parts = {d};
    out.relations.push_back(R);
  }
  for (const auto& [key, parts] : groups) {
    const auto& [row, col, idx] = key;
    cc::Relation R;
    R.tag = fm.class_names[idx].first;
    R.row_fibre = static_cast<std::uint8_t>(row);
    R.col_fibre = static_cast<std::uint8_t>(col);
    R.name = fm.class_names[idx].second + "(" + sign_name(R.row_fibre) + "," + sign_name(R.col_fibre) + ")";
    R.parts = parts;
    if (parts.size() == 1) R.label = src.relations[parts[0]].label;
    for (const auto p : parts) remap[p] = static_cast<std::uint16_t>(out.relations.size());
    out.relations.push_back(R);
  }
  out.rel.resize(src.rel.size());
  std::transform(src.rel.begin(), src.rel.end(), out.rel.begin(), [&](std::uint16_t r) { return remap[r]; });
  out.recount();
  return out;
}

std::vector<std::vector<Elem>> frobenius_orbits(const gf::Field& F, unsigned k) {
  std::vector<char> seen(F.order(), 0);
  std::vector<std::vector<Elem>> out;
  for (const Elem x : F.elements()) {
    if (seen[x.index]) continue;
    std::vector<Elem> orbit;
    Elem y = x;
    do {
      seen[y.index] = 1;
      orbit.push_back(y);
      for (unsigned s = 0; s < k; ++s) y = F.square(y);
    } while (y != x);
    std::sort(orbit.begin(), orbit.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

FusionMap frobenius_map(const cc::CoherentConfiguration& src, const gf::Field& F, unsigned k) {
  if (!F.even()) throw std::invalid_argument("Frobenius fusion needs q even");
  if (std::gcd(k, F.degree()) != 1) throw std::invalid_argument("Frobenius fusion needs gcd(k, r) = 1");
  const auto orbits = frobenius_orbits(F, k);
  std::vector<int> orbit_of(F.order());
  FusionMap fm;
  fm.name = "frobenius:" + std::to_string(k);
  for (std::size_t o = 0; o < orbits.size(); ++o) {
    std::string name = "C[";
    for (std::size_t i = 0; i < orbits[o].size(); ++i) name += (i ? " " : "") + F.to_string(orbits[o][i]);
    fm.class_names.push_back({static_cast<int>(o), name + "]"});
    for (const Elem x : orbits[o]) orbit_of[x.index] = static_cast<int>(o);
  }
  for (const auto& R : src.relations) fm.class_of.push_back(R.label ? orbit_of[R.label->index] : -1);
  return fm;
}

cc::CoherentConfiguration frobenius_fusion(const cc::CoherentConfiguration& src, const gf::Field& F, unsigned k) {
  auto out = apply_fusion(src, frobenius_map(src, F, k));
  out.variant += "/frobenius:" + std::to_string(k);
  return out;
}

std::optional<std::string> frobenius_invariance(const cc::CoherentConfiguration& src, const cc::ParamTensor& t,
                                                const gf::Field& F, unsigned k) {
  const std::size_t r = src.relations.size();
  std::vector<std::size_t> tau(r);
  for (std::size_t i = 0; i < r; ++i) {
    const auto& R = src.relations[i];
    if (!R.label) {
      tau[i] = i;
      continue;
    }
    Elem y = *R.label;
    for (unsigned s = 0; s < k; ++s) y = F.square(y);
    const auto img = src.find(y, R.row_fibre, R.col_fibre);
    if (!img) return "no image for relation " + R.name;
    tau[i] = *img;
  }
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c)
        if (t.at(a, b, c) != t.at(tau[a], tau[b], tau[c])) {
          std::ostringstream os;
          os << "p^" << src.relations[c].name << "_{" << src.relations[a].name << "," << src.relations[b].name
             << "} = " << t.at(a, b, c) << " but the image triple gives " << t.at(tau[a], tau[b], tau[c]);
          return os.str();
        }
  return std::nullopt;
}

int five_class_of(const gf::Field& K, Elem c) {
  if (!K.even() || !K.is_tower()) throw std::invalid_argument("five-class fusion needs a characteristic-2 tower step");
  if (c.index == 0) return 4;
  if (K.in_base(c)) return K.parent()->trace_bit(K.to_base(c)) == 0 ? 1 : 2;
  return K.trace_bit(c) == 0 ? 3 : 5;
}

std::array<std::int64_t, 6> class_sizes(std::int64_t q) {
  return {0, (q - 2) / 2, q / 2, q * (q - 2) / 2, 1, q * q / 2};
}

FusionMap five_class_map(const cc::CoherentConfiguration& src, const gf::Field& K, Merge merge) {
  if (!K.even() || !K.is_tower()) throw std::invalid_argument("five-class fusion needs a field F_{q^2} with q even");
  FusionMap fm;
  switch (merge) {
    case Merge::five:
      fm.name = "five";
      fm.class_names = {{1, "R1"}, {2, "R2"}, {3, "R3"}, {4, "R4"}, {5, "R5"}};
      break;
    case Merge::three:
      fm.name = "three";
      fm.class_names = {{kClass12, "R12"}, {3, "R3"}, {4, "R4"}, {5, "R5"}};
      break;
    case Merge::srg:
      fm.name = "srg";
      fm.class_names = {{kClass124, "R124"}, {3, "R3"}, {5, "R5"}};
      break;
  }
  for (const auto& R : src.relations) {
    if (!R.label) {
      fm.class_of.push_back(-1);
      continue;
    }
    int c = five_class_of(K, *R.label);
    if (merge == Merge::three && (c == 1 || c == 2)) c = kClass12;
    if (merge == Merge::srg && (c == 1 || c == 2 || c == 4)) c = kClass124;
    fm.class_of.push_back(c);
  }
  return fm;
}

cc::CoherentConfiguration five_class_fusion(const cc::CoherentConfiguration& src, const gf::Field& K, Merge merge) {
  const auto fm = five_class_map(src, K, merge);
  auto out = apply_fusion(src, fm);
  out.variant += "/" + fm.name;
  return out;
}

std::int64_t fused_valency(int cls, int eps, std::int64_t q) {
  const auto r = class_sizes(q);
  const std::int64_t q2 = q * q;
  switch (cls) {
    case 1:
    case 2:
    case 3:
    case 5:
      return r[cls] * (q2 - eps);
    case 4:
      return 2 * (q2 - 1) * delta(eps);
    case kClass12:
      return fused_valency(1, eps, q) + fused_valency(2, eps, q);
    case kClass124:
      return fused_valency(kClass12, eps, q) + fused_valency(4, eps, q);
    default:
      throw std::invalid_argument("unknown fused class");
  }
}

std::int64_t FusedTable::at(int i, int j) const {
  for (const auto& e : entries)
    if (e.i == i && e.j == j) return e.value;
  throw std::out_of_range("no such table entry");
}

std::vector<FusedTable> five_class_tables(std::int64_t q, int eps) {
  const std::vector<int> cls{1, 2, 3, 4, 5};
  std::vector<FusedTable> out;

  std::vector<Cell> c1;
  c1.push_back({1, 1, "(1+eps)q^2/2-(4+5eps)q/2+2+4eps",
                [](auto q, auto e) { return half((1 + e) * q * q - (4 + 5 * e) * q) + 2 + 4 * e; }});
  sym(c1, 1, 2, "q(q-2(eps+1))/2", [](auto q, auto e) { return half(q * (q - 2 * (e + 1))); });
  sym(c1, 1, 3, "(q^2-(4+eps)q+4(1+eps))q/2", [](auto q, auto e) { return half((q * q - (4 + e) * q + 4 * (1 + e)) * q); });
  sym(c1, 1, 4, "2(q-3)delta", [](auto q, auto e) { return 2 * (q - 3) * delta(e); });
  c1.push_back({2, 2, "q((1+eps)q-eps)/2", [](auto q, auto e) { return half(q * ((1 + e) * q - e)); }});
  sym(c1, 2, 3, "q^2(q-(2+eps))/2", [](auto q, auto e) { return half(q * q * (q - (2 + e))); });
  sym(c1, 2, 4, "2q delta", [](auto q, auto e) { return 2 * q * delta(e); });
  c1.push_back({3, 3, "(q^3-4q^2+(4-eps)q+2eps)q/2",
                [](auto q, auto e) { return half((q * q * q - 4 * q * q + (4 - e) * q + 2 * e) * q); }});
  sym(c1, 3, 4, "2q(q-2)delta", [](auto q, auto e) { return 2 * q * (q - 2) * delta(e); });
  c1.push_back({4, 4, "4delta", [](auto, auto e) { return 4 * delta(e); }});
  add_v5(c1);
  out.push_back(make_table("five-class k=1", 1, cls, c1, q, eps));

  std::vector<Cell> c2;
  c2.push_back({1, 1, "(q/2-1)(q-2(eps+1))", [](auto q, auto e) { return (half(q) - 1) * (q - 2 * (e + 1)); }});
  sym(c2, 1, 2, "(1+eps)q^2/2-(3eps+2)q/2+eps",
      [](auto q, auto e) { return half((1 + e) * q * q - (3 * e + 2) * q) + e; });
  // Balanced reading of the (1,3) entry; confirmed by the row sums.
  sym(c2, 1, 3, "(q^2-(4+eps)q+2(eps+2))q/2", [](auto q, auto e) { return half((q * q - (4 + e) * q + 2 * (e + 2)) * q); });
  sym(c2, 1, 4, "2(q-2)delta", [](auto q, auto e) { return 2 * (q - 2) * delta(e); });
  c2.push_back({2, 2, "q(q/2-eps)", [](auto q, auto e) { return q * (half(q) - e); }});
  sym(c2, 2, 3, "(q^2-(2+eps)q+2eps)q/2", [](auto q, auto e) { return half((q * q - (2 + e) * q + 2 * e) * q); });
  sym(c2, 2, 4, "2(q-1)delta", [](auto q, auto e) { return 2 * (q - 1) * delta(e); });
  c2.push_back({3, 3, "(q^3-4q^2+(4-eps)q+2eps)q/2",
                [](auto q, auto e) { return half((q * q * q - 4 * q * q + (4 - e) * q + 2 * e) * q); }});
  sym(c2, 3, 4, "2q(q-2)delta", [](auto q, auto e) { return 2 * q * (q - 2) * delta(e); });
  c2.push_back({4, 4, "4delta", [](auto, auto e) { return 4 * delta(e); }});
  add_v5(c2);
  out.push_back(make_table("five-class k=2", 2, cls, c2, q, eps));

  std::vector<Cell> c3;
  c3.push_back({1, 1, "(q^2-(eps+4)q+4(eps+1))/2", [](auto q, auto e) { return half(q * q - (e + 4) * q + 4 * (e + 1)); }});
  sym(c3, 1, 2, "q(q-eps-2)/2", [](auto q, auto e) { return half(q * (q - e - 2)); });
  sym(c3, 1, 3, "(q/2-1)(q^2-2q-eps)", [](auto q, auto e) { return (half(q) - 1) * (q * q - 2 * q - e); });
  sym(c3, 1, 4, "2(q-2)delta", [](auto q, auto e) { return 2 * (q - 2) * delta(e); });
  c3.push_back({2, 2, "q(q-eps)/2", [](auto q, auto e) { return half(q * (q - e)); }});
  sym(c3, 2, 3, "(q^2-2q-eps)q/2", [](auto q, auto e) { return half((q * q - 2 * q - e) * q); });
  sym(c3, 2, 4, "2q delta", [](auto q, auto e) { return 2 * q * delta(e); });
  c3.push_back({3, 3, "(q^3-4q^2+(4-3eps)q+8eps)q/2",
                [](auto q, auto e) { return half((q * q * q - 4 * q * q + (4 - 3 * e) * q + 8 * e) * q); }});
  sym(c3, 3, 4, "2r delta, r=q^2-2q-1", [](auto q, auto e) { return 2 * (q * q - 2 * q - 1) * delta(e); });
  c3.push_back({4, 4, "4delta", [](auto, auto e) { return 4 * delta(e); }});
  add_v5(c3);
  out.push_back(make_table("five-class k=3", 3, cls, c3, q, eps));

  if (eps == 1) {
    std::vector<Cell> c4;
    c4.push_back({1, 1, "(q-2)(q-3)/2", [](auto q, auto) { return half((q - 2) * (q - 3)); }});
    sym(c4, 1, 2, "q(q-2)/2", [](auto q, auto) { return half(q * (q - 2)); });
    sym(c4, 1, 3, "q(q-2)^2/2", [](auto q, auto) { return half(q * (q - 2) * (q - 2)); });
    sym(c4, 1, 4, "q-2", [](auto q, auto) { return q - 2; });
    c4.push_back({2, 2, "q(q-1)/2", [](auto q, auto) { return half(q * (q - 1)); }});
    sym(c4, 2, 3, "q^2(q-2)/2", [](auto q, auto) { return half(q * q * (q - 2)); });
    sym(c4, 2, 4, "q", [](auto q, auto) { return q; });
    c4.push_back({3, 3, "q(q-2)r/2, r=q^2-2q-1", [](auto q, auto) { return half(q * (q - 2) * (q * q - 2 * q - 1)); }});
    sym(c4, 3, 4, "q(q-2)", [](auto q, auto) { return q * (q - 2); });
    c4.push_back({4, 4, "q^2-1", [](auto q, auto) { return q * q - 1; }});
    add_v5(c4);
    out.push_back(make_table("five-class k=4", 4, cls, c4, q, eps));
  }

  out.push_back(make_table("five-class k=5", 5, cls, mixed_cells({1, 2, 3, 4}), q, eps));
  return out;
}

std::vector<FusedTable> three_class_tables(std::int64_t q, int eps) {
  const std::vector<int> cls{kClass12, 3, 4, 5};
  std::vector<FusedTable> out;

  std::vector<Cell> c12;
  c12.push_back({kClass12, kClass12, "(2+eps)q^2-(4+5eps)q+2+4eps",
                 [](auto q, auto e) { return (2 + e) * q * q - (4 + 5 * e) * q + 2 + 4 * e; }});
  sym(c12, kClass12, 3, "q(q^2-(eps+3)q+2(1+eps))", [](auto q, auto e) { return q * (q * q - (e + 3) * q + 2 * (1 + e)); });
  sym(c12, kClass12, 4, "2(2q-3)delta", [](auto q, auto e) { return 2 * (2 * q - 3) * delta(e); });
  c12.push_back({3, 3, "(q^3-4q^2+(4-eps)q+2eps)q/2",
                 [](auto q, auto e) { return half((q * q * q - 4 * q * q + (4 - e) * q + 2 * e) * q); }});
  sym(c12, 3, 4, "2q(q-2)delta", [](auto q, auto e) { return 2 * q * (q - 2) * delta(e); });
  c12.push_back({4, 4, "4delta", [](auto, auto e) { return 4 * delta(e); }});
  add_v5(c12);
  out.push_back(make_table("three-class k={1,2}", kClass12, cls, c12, q, eps));

  std::vector<Cell> c3;
  c3.push_back({kClass12, kClass12, "2q^2-(2eps+4)q+2(eps+1)",
                [](auto q, auto e) { return 2 * q * q - (2 * e + 4) * q + 2 * (e + 1); }});
  sym(c3, kClass12, 3, "q^3-3q^2-(eps-2)q+eps", [](auto q, auto e) { return q * q * q - 3 * q * q - (e - 2) * q + e; });
  sym(c3, kClass12, 4, "4(q-1)delta", [](auto q, auto e) { return 4 * (q - 1) * delta(e); });
  c3.push_back({3, 3, "(q^3-4q^2+(4-3eps)q+8eps)q/2",
                [](auto q, auto e) { return half((q * q * q - 4 * q * q + (4 - 3 * e) * q + 8 * e) * q); }});
  sym(c3, 3, 4, "2r delta, r=q^2-2q-1", [](auto q, auto e) { return 2 * (q * q - 2 * q - 1) * delta(e); });
  c3.push_back({4, 4, "4delta", [](auto, auto e) { return 4 * delta(e); }});
  add_v5(c3);
  out.push_back(make_table("three-class k=3", 3, cls, c3, q, eps));

  if (eps == 1) {
    std::vector<Cell> c4;
    c4.push_back({kClass12, kClass12, "2q^2-5q+3", [](auto q, auto) { return 2 * q * q - 5 * q + 3; }});
    sym(c4, kClass12, 3, "q(q-1)(q-2)", [](auto q, auto) { return q * (q - 1) * (q - 2); });
    sym(c4, kClass12, 4, "2(q-1)", [](auto q, auto) { return 2 * (q - 1); });
    c4.push_back({3, 3, "q(q-2)r/2, r=q^2-2q-1", [](auto q, auto) { return half(q * (q - 2) * (q * q - 2 * q - 1)); }});
    sym(c4, 3, 4, "q(q-2)", [](auto q, auto) { return q * (q - 2); });
    c4.push_back({4, 4, "q^2-1", [](auto q, auto) { return q * q - 1; }});
    add_v5(c4);
    out.push_back(make_table("three-class k=4", 4, cls, c4, q, eps));
  }

  out.push_back(make_table("three-class k=5", 5, cls, mixed_cells({kClass12, 3, 4}), q, eps));
  return out;
}

std::vector<FusedTable> srg_tables(std::int64_t q) {
  const std::vector<int> cls{kClass124, 3, 5};
  std::vector<FusedTable> out;

  std::vector<Cell> c124;
  c124.push_back({kClass124, kClass124, "3q^2-q-2", [](auto q, auto) { return 3 * q * q - q - 2; }});
  sym(c124, kClass124, 3, "q^2(q-2)", [](auto q, auto) { return q * q * (q - 2); });
  c124.push_back({3, 3, "q(q-2)r/2, r=q^2-2q-1", [](auto q, auto) { return half(q * (q - 2) * (q * q - 2 * q - 1)); }});
  add_v5(c124);
  out.push_back(make_table("srg k={1,2,4}", kClass124, cls, c124, q, 1));

  std::vector<Cell> c3;
  // Equals the graph parameter mu; the form 2q(q+2) is inconsistent with the
  // row sums and with mu.
  c3.push_back({kClass124, kClass124, "2q(q+1)", [](auto q, auto) { return 2 * q * (q + 1); }});
  sym(c3, kClass124, 3, "(q+1)r, r=q^2-2q-1", [](auto q, auto) { return (q + 1) * (q * q - 2 * q - 1); });
  c3.push_back({3, 3, "(q^3-4q^2+q+8)q/2", [](auto q, auto) { return half((q * q * q - 4 * q * q + q + 8) * q); }});
  add_v5(c3);
  out.push_back(make_table("srg k=3", 3, cls, c3, q, 1));
  return out;
}

std::vector<FusedTable> tables_for(Merge merge, std::int64_t q) {
  std::vector<FusedTable> out;
  if (merge == Merge::srg) return srg_tables(q);
  for (const int eps : {1, -1}) {
    auto t = merge == Merge::five ? five_class_tables(q, eps) : three_class_tables(q, eps);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

std::optional<std::int64_t> counted_entry(const cc::CoherentConfiguration& fused, const cc::ParamTensor& t, int k,
                                          int i, int j, int eps) {
  const auto f = fused.fibre_of_sign(eps);
  if (!f) return std::nullopt;
  std::optional<std::size_t> kk;
  for (std::size_t r = 0; r < fused.relations.size(); ++r) {
    const auto& R = fused.relations[r];
    if (!R.diagonal && R.tag == k && R.row_fibre == *f) kk = r;
  }
  if (!kk) return std::nullopt;
  const auto& K = fused.relations[*kk];
  std::int64_t total = 0;
  for (std::size_t a = 0; a < fused.relations.size(); ++a) {
    const auto& I = fused.relations[a];
    if (I.diagonal || I.tag != i || I.row_fibre != K.row_fibre) continue;
    for (std::size_t b = 0; b < fused.relations.size(); ++b) {
      const auto& J = fused.relations[b];
      if (J.diagonal || J.tag != j || J.row_fibre != I.col_fibre || J.col_fibre != K.col_fibre) continue;
      total += t.at(a, b, *kk);
    }
  }
  return total;
}

SrgParams srg_params(std::int64_t q, int eps) {
  const std::int64_t q2 = q * q;
  return {half(q2 * (q2 + eps)), (q2 - eps) * (q + eps), 2 * (q2 - 1) + eps * q * (q - 1), 2 * q * (q + eps)};
}

bool srg_feasible(const SrgParams& p) { return p.k * (p.k - p.lambda - 1) == (p.v - p.k - 1) * p.mu; }

std::uint64_t Graph::edges() const {
  std::uint64_t s = 0;
  for (const auto& a : adj) s += a.size();
  return s / 2;
}

Graph srg_graph(const cc::CoherentConfiguration& fused, int eps) {
  const auto f = fused.fibre_of_sign(eps);
  if (!f) throw std::invalid_argument("no fibre with this sign");
  const auto pts = fused.members(*f);
  Graph g;
  g.n = static_cast<std::uint32_t>(pts.size());
  g.adj.resize(g.n);
  for (std::uint32_t a = 0; a < g.n; ++a)
    for (std::uint32_t b = 0; b < g.n; ++b) {
      const auto& R = fused.relations[fused.at(pts[a], pts[b])];
      if (!R.diagonal && R.tag == kClass124) g.adj[a].push_back(b);
    }
  return g;
}

std::optional<SrgParams> verify_srg(const Graph& g, std::string* why) {
  auto fail = [&](const std::string& s) -> std::optional<SrgParams> {
    if (why) *why = s;
    return std::nullopt;
  };
  if (g.n < 2) return fail("graph too small");
  const std::size_t words = (g.n + 63) / 64;
  std::vector<std::uint64_t> bits(static_cast<std::size_t>(g.n) * words, 0);
  for (std::uint32_t a = 0; a < g.n; ++a)
    for (const auto b : g.adj[a]) {
      if (b == a) return fail("loop at vertex " + std::to_string(a));
      bits[a * words + b / 64] |= 1ull << (b % 64);
    }
  SrgParams p;
  p.v = g.n;
  p.k = static_cast<std::int64_t>(g.adj[0].size());
  std::int64_t lambda = -1, mu = -1;
  for (std::uint32_t a = 0; a < g.n; ++a) {
    if (static_cast<std::int64_t>(g.adj[a].size()) != p.k) return fail("vertex " + std::to_string(a) + " has another degree");
    for (std::uint32_t b = a + 1; b < g.n; ++b) {
      std::int64_t common = 0;
      for (std::size_t w = 0; w < words; ++w) common += std::popcount(bits[a * words + w] & bits[b * words + w]);
      const bool adjacent = (bits[a * words + b / 64] >> (b % 64)) & 1;
      if (adjacent != static_cast<bool>((bits[b * words + a / 64] >> (a % 64)) & 1)) return fail("adjacency not symmetric");
      auto& slot = adjacent ? lambda : mu;
      if (slot < 0) slot = common;
      if (slot != common) {
        std::ostringstream os;
        os << "pair (" << a << "," << b << ") has " << common << " common neighbours, expected " << slot;
        return fail(os.str());
      }
    }
  }
  p.lambda = std::max<std::int64_t>(lambda, 0);
  p.mu = std::max<std::int64_t>(mu, 0);
  return p;
}

std::string edgelist(const Graph& g) {
  std::ostringstream os;
  os << "# vertices " << g.n << "\n# edges " << g.edges() << "\n";
  for (std::uint32_t a = 0; a < g.n; ++a)
    for (const auto b : g.adj[a])
      if (a < b) os << a << ' ' << b << '\n';
  return os.str();
}

std::pair<IntMatrix, IntMatrix> elliptic_fusion_eigenmatrices(std::int64_t q) {
  const std::int64_t s = q * q + 1;
  IntMatrix P{{1, half((q - 2) * s), half(q * s), half(q * (q - 2) * s)},
              {1, -half((q - 1) * (q - 2)), -half(q * (q - 1)), q * (q - 2)},
              {1, -half(q * q - q + 2), half(q * (q + 1)), -q},
              {1, q - 1, 0, -q}};
  IntMatrix Q{{1, half(q * s), half((q - 2) * s), half(q * (q - 2) * s)},
              {1, -half(q * (q - 1)), -half(q * q - q + 2), q * (q - 1)},
              {1, -half(q * (q - 1)), half((q - 2) * (q + 1)), 0},
              {1, q, -1, -q}};
  return {P, Q};
}

std::optional<std::vector<std::size_t>> match_rows(const std::vector<std::vector<double>>& numeric,
                                                   const IntMatrix& exact, double tol) {
  if (numeric.size() != exact.size()) return std::nullopt;
  std::vector<std::size_t> order;
  std::vector<char> used(numeric.size(), 0);
  for (const auto& row : exact) {
    std::optional<std::size_t> hit;
    for (std::size_t r = 0; r < numeric.size() && !hit; ++r) {
      if (used[r] || numeric[r].size() != row.size()) continue;
      bool same = true;
      for (std::size_t c = 0; c < row.size() && same; ++c)
        same = std::abs(numeric[r][c] - static_cast<double>(row[c])) < tol;
      if (same) hit = r;
    }
    if (!hit) return std::nullopt;
    used[*hit] = 1;
    order.push_back(*hit);
  }
  return order;
}

}  // namespace conic::fusion
