#pragma once

// Fusions of the conic configuration: along a field automorphism, into the
// five classes R1..R5 over F_{q^2}, and the further merges {1,2} and {1,2,4}
// that give strongly regular graphs.  Closed-form intersection tables.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conic/coherent.hpp"
#include "conic/projconic.hpp"

namespace conic::fusion {

using gf::Elem;

/// class_of[r] is the fused class of non-diagonal relation r (diagonal
/// relations are kept as they are).  Class ids are arbitrary non-negative
/// integers; `class_names` gives the display name of each id in use.
struct FusionMap {
  std::string name;
  std::vector<int> class_of;
  std::vector<std::pair<int, std::string>> class_names;
};

/// Fused relations are ordered: diagonals, then by (row fibre, column fibre,
/// class order in class_names).  Fused relations carry tag = class id.
cc::CoherentConfiguration apply_fusion(const cc::CoherentConfiguration& cc, const FusionMap& fm);

/// Orbits of x -> x^{2^k} on F_q, in order of their smallest element.
std::vector<std::vector<Elem>> frobenius_orbits(const gf::Field& F, unsigned k);

/// Throws std::invalid_argument unless q is even and gcd(k, r) = 1 (q = 2^r).
FusionMap frobenius_map(const cc::CoherentConfiguration& cc, const gf::Field& F, unsigned k);
cc::CoherentConfiguration frobenius_fusion(const cc::CoherentConfiguration& cc, const gf::Field& F, unsigned k);

/// Checks p^c_{a,b}(eps) = p^{tau c}_{tau a, tau b}(eps) over every triple of
/// relations, tau the relation map induced by x -> x^{2^k} on labels.
/// nullopt when invariant, otherwise the first failing triple.
std::optional<std::string> frobenius_invariance(const cc::CoherentConfiguration& cc, const cc::ParamTensor& t,
                                                const gf::Field& F, unsigned k);

/// Class 1..5 of a nonzero label c over F_{q^2} (a characteristic-2 tower
/// step over F_q): S_0^*, S_1, T_0 \ F_q, {0}, T_1.
int five_class_of(const gf::Field& K, Elem c);

/// Sizes r_1..r_5 of the label sets; r[0] is unused.
std::array<std::int64_t, 6> class_sizes(std::int64_t q);

/// Class ids used by the merged fusions.
inline constexpr int kClass12 = 12;
inline constexpr int kClass124 = 124;

enum class Merge { five, three, srg };

/// Throws std::invalid_argument unless the field is a characteristic-2 tower
/// step F_{q^2} over F_q.
FusionMap five_class_map(const cc::CoherentConfiguration& cc, const gf::Field& K, Merge merge = Merge::five);
cc::CoherentConfiguration five_class_fusion(const cc::CoherentConfiguration& cc, const gf::Field& K,
                                            Merge merge = Merge::five);

/// Fused valency v_i(eps) over F_{q^2} for classes 1..5 and the merged ids.
std::int64_t fused_valency(int cls, int eps, std::int64_t q);

/// One closed-form entry p^k_{i,j}(eps).
struct TableEntry {
  int k = 0, i = 0, j = 0;
  std::string formula;
  std::int64_t value = 0;
};

struct FusedTable {
  std::string name;
  int eps = 1;
  int k = 0;                 // class of the reference pair
  std::vector<int> classes;  // row and column classes, in display order
  std::vector<TableEntry> entries;  // every (i, j) of classes x classes

  std::int64_t at(int i, int j) const;
};

/// Five-class tables p^k_{i,j}(eps), k = 1..5 (k = 4 only for eps = 1).
std::vector<FusedTable> five_class_tables(std::int64_t q, int eps);
/// Tables for the {1,2} merge, k in {12, 3, 4, 5} (k = 4 only for eps = 1).
std::vector<FusedTable> three_class_tables(std::int64_t q, int eps);
/// Tables for the {1,2,4} merge on hyperbolic lines, k in {124, 3}.
std::vector<FusedTable> srg_tables(std::int64_t q);
/// Everything applicable to the merge level, both signs.
std::vector<FusedTable> tables_for(Merge merge, std::int64_t q);

/// p^k_{i,j}(eps) counted in a fused configuration: the reference pair is a
/// relation of class k leaving the fibre of sign eps; nullopt when there is
/// no such relation.
std::optional<std::int64_t> counted_entry(const cc::CoherentConfiguration& fused, const cc::ParamTensor& t, int k,
                                          int i, int j, int eps);

struct SrgParams {
  std::int64_t v = 0, k = 0, lambda = 0, mu = 0;

  friend bool operator==(const SrgParams&, const SrgParams&) = default;
};

/// (q^2(q^2+eps)/2, (q^2-eps)(q+eps), 2(q^2-1)+eps q(q-1), 2q(q+eps)).
SrgParams srg_params(std::int64_t q, int eps);
bool srg_feasible(const SrgParams& p);

/// Graph on the fibre of sign eps of an srg-merged configuration, adjacency
/// given by the merged class ({1,2,4} on hyperbolic lines, {1,2} on elliptic).
struct Graph {
  std::uint32_t n = 0;
  std::vector<std::vector<std::uint32_t>> adj;

  std::uint64_t edges() const;
};

Graph srg_graph(const cc::CoherentConfiguration& fused, int eps);

/// Checks every vertex degree and every pair's common-neighbour count;
/// returns the parameters when the graph is strongly regular.
std::optional<SrgParams> verify_srg(const Graph& g, std::string* why = nullptr);

std::string edgelist(const Graph& g);

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// P and Q of the 3-class elliptic fusion, columns in class order 1, 2, 3.
std::pair<IntMatrix, IntMatrix> elliptic_fusion_eigenmatrices(std::int64_t q);

/// order[i] is the row of `numeric` equal to row i of `exact` within `tol`;
/// nullopt unless the rows correspond one to one.
std::optional<std::vector<std::size_t>> match_rows(const std::vector<std::vector<double>>& numeric,
                                                   const IntMatrix& exact, double tol = 1e-6);

}  // namespace conic::fusion
