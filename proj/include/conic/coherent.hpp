#pragma once

// Coherent configurations on a finite ground set: storage, axiom checks,
// intersection numbers, closed-form parameters for the conic configuration,
// spectra, pseudocyclicity and the cyclotomic reference scheme.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conic/gf.hpp"

namespace conic::cc {

using gf::Elem;

struct Relation {
  std::string name;
  bool diagonal = false;
  std::optional<Elem> label;  // modified cross-ratio value, for labeled relations
  int tag = -1;               // class index for orbit, fused or cyclotomic relations
  std::uint8_t row_fibre = 0;
  std::uint8_t col_fibre = 0;
  std::uint64_t size = 0;            // number of ordered pairs
  std::vector<std::uint16_t> parts;  // source relation ids of a fusion
};

/// Dense relation-id matrix over {0..n-1}.  Fibre 0 holds the hyperbolic
/// lines and fibre 1 the elliptic ones for configurations built from a conic;
/// plain association schemes have a single fibre.
struct CoherentConfiguration {
  std::uint32_t n = 0;
  std::vector<std::uint8_t> fibre;
  std::vector<int> fibre_sign;  // +1, -1, or 0 for an unsigned fibre
  std::vector<std::uint16_t> rel;
  std::vector<Relation> relations;
  std::string variant;

  std::uint16_t at(std::uint32_t i, std::uint32_t j) const { return rel[static_cast<std::size_t>(i) * n + j]; }
  std::size_t num_fibres() const { return fibre_sign.size(); }
  std::size_t num_relations() const { return relations.size(); }
  std::vector<std::uint32_t> members(std::uint8_t f) const;
  std::uint32_t fibre_size(std::uint8_t f) const;
  std::uint64_t valency(std::uint16_t r) const;
  /// Relation with the given label and fibre pair, if present.
  std::optional<std::uint16_t> find(Elem label, std::uint8_t row, std::uint8_t col) const;
  /// Index of the fibre with the given sign.
  std::optional<std::uint8_t> fibre_of_sign(int sign) const;
  /// Recomputes relation sizes from the matrix.
  void recount();
};

/// nullopt when both configurations induce the same partition of the pairs
/// (relation ids may differ); otherwise a description of the first mismatch.
std::optional<std::string> partition_mismatch(const CoherentConfiguration& a, const CoherentConfiguration& b);

enum class VerifyMode { full, sampled };

struct AxiomReport {
  bool partition = false;
  bool diagonal = false;
  bool transpose = false;
  bool constant = false;
  VerifyMode mode = VerifyMode::full;
  std::uint64_t seed = 0;
  std::uint64_t pairs_checked = 0;
  std::string counterexample;

  bool pass() const { return partition && diagonal && transpose && constant; }
};

/// Checks the coherent-configuration axioms.  Constancy of the intersection
/// numbers is tested on every pair (full) or on `samples` random pairs per
/// relation (sampled, all pairs when a relation is smaller).
AxiomReport verify_axioms(const CoherentConfiguration& cc, VerifyMode mode = VerifyMode::full,
                          std::uint64_t seed = 0, std::uint32_t samples = 100);

/// Transposed relation of each relation; throws std::invalid_argument when
/// the transpose of a relation is not a relation.
std::vector<std::uint16_t> transpose_map(const CoherentConfiguration& cc);

bool is_symmetric(const CoherentConfiguration& cc);

/// The configuration induced on one fibre, relabelled so that the diagonal is
/// relation 0.  Throws std::invalid_argument when the restriction is not
/// symmetric.
CoherentConfiguration restrict_fibre(const CoherentConfiguration& cc, std::uint8_t fibre);

struct ParamTensor {
  std::size_t r = 0;
  std::vector<std::uint32_t> p;  // p[(i*r + j)*r + k] = p^k_{ij}
  std::vector<std::uint64_t> valency;
  std::vector<std::uint32_t> fibre_size;

  std::uint32_t at(std::size_t i, std::size_t j, std::size_t k) const { return p[(i * r + j) * r + k]; }
};

/// p^k_{ij} counted on one representative pair of each relation k.
ParamTensor intersection_tensor(const CoherentConfiguration& cc);

/// v_a(eps) of the conic configuration over the base field of `k`.  Throws
/// std::invalid_argument for a label that never occurs with row type eps.
std::int64_t closed_form_valency(const gf::TraceClasses& k, Elem a, int eps);

/// pi^c_{a,b}(eps) for q even (lines n of any type with labels a from l and b
/// to m, where (l, m) has label c and l has type eps).  Throws
/// std::invalid_argument for odd q.
std::int64_t closed_form_pi(const gf::TraceClasses& k, Elem a, Elem b, Elem c, int eps);

/// p^c_{a,b}(eps) = pi^c_{a,b}(eps) minus the contributions of n = l and n = m.
std::int64_t closed_form_p(const gf::TraceClasses& k, Elem a, Elem b, Elem c, int eps);

/// p^c_{a,b}(eps) read from a counted tensor of a labeled configuration: the
/// sum of p^k_{ij} over relations i, j with labels a, b that compose through
/// any fibre, where k is a labeled relation with label c leaving fibre eps.
std::int64_t counted_p(const CoherentConfiguration& cc, const ParamTensor& t, Elem a, Elem b, std::uint16_t k);

/// counted_p for every label pair at once: entry a*q + b, q the field order.
std::vector<std::int64_t> counted_p_table(const CoherentConfiguration& cc, const ParamTensor& t, std::uint16_t k,
                                          std::uint32_t q);

struct ClosedFormReport {
  std::uint64_t valencies = 0;   // relations compared
  std::uint64_t parameters = 0;  // (a, b, c, eps) compared
  std::optional<std::string> mismatch;

  bool pass() const { return !mismatch; }
};

/// Counted valencies of every labeled relation against closed_form_valency,
/// and for q even every p^c_{a,b}(eps) against closed_form_p.
ClosedFormReport check_closed_forms(const CoherentConfiguration& cc, const gf::TraceClasses& k);

struct SpectralData {
  bool ok = false;
  std::string error;
  std::vector<std::vector<double>> P;  // P[i][j] = eigenvalue of A_j on eigenspace i
  std::vector<std::vector<double>> Q;
  std::vector<std::uint32_t> multiplicity;
  double residual = 0.0;      // max ||A_j U_i - P_j(i) U_i||
  double pq_residual = 0.0;   // max |(PQ - nI)_{ab}|
};

/// Common eigenspaces of the adjacency matrices of a symmetric association
/// scheme, found from a random linear combination; eigenvalues closer than
/// `tol` (relative to the spectral radius) are clustered.
SpectralData spectral(const CoherentConfiguration& scheme, double tol = 1e-8, std::uint64_t seed = 0);

/// P rounded to integers; nullopt if any entry is further than `tol` from an
/// integer.
std::optional<std::vector<std::vector<std::int64_t>>> rounded(const std::vector<std::vector<double>>& m,
                                                             double tol = 1e-6);

struct PseudocyclicReport {
  bool pass = false;
  std::uint64_t t = 0;
  std::string detail;
};

/// All non-diagonal valencies equal t and sum_k p^k_{kj} = t - 1 for every j.
PseudocyclicReport pseudocyclic_check(const CoherentConfiguration& scheme, const ParamTensor& t);

/// Whether the blocks R_i(x) (x a point, i non-diagonal) form a
/// 2-(n, t, t-1) design, by counting every pair of points.
bool design_check(const CoherentConfiguration& scheme, std::uint64_t t);

/// Cyclotomic scheme on F_q: x ~ y in class i iff x - y lies in the i-th coset
/// of the subgroup of e-th powers.  Throws std::invalid_argument unless
/// 1 < e, e | q - 1 and -1 is an e-th power.
CoherentConfiguration build_cyclotomic(const gf::FieldPtr& field, std::uint32_t e);

}  // namespace conic::cc
