#include <gtest/gtest.h>

#include <cmath>

#include "conic/coherent.hpp"
#include "conic/fusion.hpp"
#include "conic/group_action.hpp"

using namespace conic;
using fusion::Merge;

namespace {

gf::FieldPtr field(std::uint32_t q) {
  auto pp = gf::prime_power(q).value();
  return gf::Field::make(pp.first, pp.second);
}

struct Built {
  gf::FieldPtr K;
  cc::CoherentConfiguration cc;
};

// Conic configuration over F_{q^2}, the field built as a tower over F_q.
Built over_square(std::uint32_t q) {
  auto K = gf::Field::extend(field(q));
  geom::Conic C(K);
  const auto ls = C.enumerate_lines();
  return {K, group::build_cc_formula(C, ls)};
}

Built plain(std::uint32_t q) {
  auto F = field(q);
  geom::Conic C(F);
  const auto ls = C.enumerate_lines();
  return {F, group::build_cc_formula(C, ls)};
}

}  // namespace

TEST(Frobenius, OrbitsPartitionTheField) {
  const auto F = field(16);
  for (unsigned k : {1u, 3u}) {
    const auto orbits = fusion::frobenius_orbits(*F, k);
    std::size_t total = 0;
    for (const auto& o : orbits) total += o.size();
    EXPECT_EQ(total, 16u);
    // {0}, {1}, the two primitive elements of F_4, three orbits of size 4.
    EXPECT_EQ(orbits.size(), 6u);
  }
}

TEST(Frobenius, FusionIsCoherent) {
  for (std::uint32_t q : {4u, 8u}) {
    const auto b = plain(q);
    const auto fused = fusion::frobenius_fusion(b.cc, *b.K, 1);
    const auto rep = cc::verify_axioms(fused);
    EXPECT_TRUE(rep.pass()) << q << ": " << rep.counterexample;
    EXPECT_LT(fused.num_relations(), b.cc.num_relations());
  }
}

TEST(Frobenius, LabelsOfAPairAndItsImageShareAClass) {
  const auto b = plain(8);
  const auto fm = fusion::frobenius_map(b.cc, *b.K, 1);
  for (std::size_t r = 0; r < b.cc.relations.size(); ++r) {
    const auto& R = b.cc.relations[r];
    if (!R.label) continue;
    const auto image = b.K->square(*R.label);
    const auto s = b.cc.find(image, R.row_fibre, R.col_fibre);
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(fm.class_of[r], fm.class_of[*s]);
  }
}

TEST(Frobenius, ParametersAreInvariant) {
  for (std::uint32_t q : {4u, 8u, 16u}) {
    const auto b = plain(q);
    const auto t = cc::intersection_tensor(b.cc);
    for (unsigned k = 1; k < 4; ++k) {
      const auto bad = fusion::frobenius_invariance(b.cc, t, *b.K, k);
      EXPECT_FALSE(bad.has_value()) << q << ": " << *bad;
    }
  }
}

TEST(Frobenius, InvarianceCheckCatchesAPerturbedTensor) {
  const auto b = plain(8);
  auto t = cc::intersection_tensor(b.cc);
  std::size_t c = 0;
  while (!b.cc.relations[c].label || b.K->square(*b.cc.relations[c].label) == *b.cc.relations[c].label) ++c;
  t.p[(c * t.r + c) * t.r + c] += 1;
  EXPECT_TRUE(fusion::frobenius_invariance(b.cc, t, *b.K, 1).has_value());
}

TEST(Frobenius, RejectsBadExponentAndOddCharacteristic) {
  const auto b = plain(16);
  EXPECT_THROW(fusion::frobenius_map(b.cc, *b.K, 2), std::invalid_argument);
  const auto o = plain(5);
  EXPECT_THROW(fusion::frobenius_map(o.cc, *o.K, 1), std::invalid_argument);
}

TEST(FiveClass, LabelSetSizes) {
  for (std::uint32_t q : {2u, 4u, 8u}) {
    const auto K = gf::Field::extend(field(q));
    std::array<std::int64_t, 6> count{};
    for (const auto c : K->elements()) ++count[fusion::five_class_of(*K, c)];
    const auto r = fusion::class_sizes(q);
    for (int i = 1; i <= 5; ++i) EXPECT_EQ(count[i], r[i]) << "q=" << q << " class " << i;
  }
}

TEST(FiveClass, RequiresEvenTower) {
  EXPECT_THROW(fusion::five_class_of(*field(16), gf::Elem{1}), std::invalid_argument);
  EXPECT_THROW(fusion::five_class_of(*gf::Field::extend(field(3)), gf::Elem{1}), std::invalid_argument);
}

TEST(FiveClass, FusionsAreCoherentWithStatedValencies) {
  const auto b = over_square(4);
  for (Merge m : {Merge::five, Merge::three, Merge::srg}) {
    const auto fused = fusion::five_class_fusion(b.cc, *b.K, m);
    const auto rep = cc::verify_axioms(fused);
    EXPECT_TRUE(rep.pass()) << rep.counterexample;
    for (const auto& R : fused.relations) {
      if (R.diagonal) continue;
      const int eps = fused.fibre_sign[R.row_fibre];
      std::int64_t expect = fusion::fused_valency(R.tag, eps, 4);
      EXPECT_EQ(R.tag == 5, R.row_fibre != R.col_fibre) << R.name;
      const auto r = static_cast<std::uint16_t>(&R - fused.relations.data());
      EXPECT_EQ(static_cast<std::int64_t>(fused.valency(r)), expect) << R.name;
    }
  }
}

TEST(Tables, MatchCountsAtQ4AndQ8) {
  for (std::uint32_t q : {4u, 8u}) {
    const auto b = over_square(q);
    for (Merge m : {Merge::five, Merge::three, Merge::srg}) {
      const auto fused = fusion::five_class_fusion(b.cc, *b.K, m);
      const auto t = cc::intersection_tensor(fused);
      for (const auto& table : fusion::tables_for(m, q))
        for (const auto& e : table.entries) {
          const auto got = fusion::counted_entry(fused, t, e.k, e.i, e.j, table.eps);
          ASSERT_TRUE(got.has_value()) << table.name;
          EXPECT_EQ(*got, e.value) << "q=" << q << " " << table.name << " eps=" << table.eps << " (" << e.i << ","
                                   << e.j << ") " << e.formula;
        }
    }
  }
}

TEST(Tables, RowSumsEqualValencies) {
  // Summing p^k_{i,j} over the non-diagonal classes j counts the class-i
  // neighbours of one end, less the other end itself when i = k.
  for (std::int64_t q : {4, 8, 16, 32})
    for (Merge m : {Merge::five, Merge::three, Merge::srg})
      for (const auto& table : fusion::tables_for(m, q))
        for (const int i : table.classes) {
          std::int64_t s = 0;
          for (const int j : table.classes) s += table.at(i, j);
          EXPECT_EQ(s, fusion::fused_valency(i, table.eps, q) - (i == table.k ? 1 : 0))
              << table.name << " eps=" << table.eps << " q=" << q << " row " << i;
        }
}

TEST(Tables, MuEntryIsTwoQTimesQPlusOneNotQPlusTwo) {
  const std::int64_t q = 4;
  const auto b = over_square(q);
  const auto fused = fusion::five_class_fusion(b.cc, *b.K, Merge::srg);
  const auto t = cc::intersection_tensor(fused);
  const auto got = fusion::counted_entry(fused, t, 3, fusion::kClass124, fusion::kClass124, 1);
  ASSERT_TRUE(got.has_value());
  EXPECT_EQ(*got, 2 * q * (q + 1));
  EXPECT_NE(*got, 2 * q * (q + 2));
  EXPECT_EQ(*got, fusion::srg_params(q, 1).mu);
}

TEST(Srg, ParametersAtQ4) {
  EXPECT_EQ(fusion::srg_params(4, -1), (fusion::SrgParams{120, 51, 18, 24}));
  EXPECT_EQ(fusion::srg_params(4, 1), (fusion::SrgParams{136, 75, 42, 40}));
}

TEST(Srg, FeasibleForEvenQ) {
  for (std::int64_t q : {2, 4, 8, 16})
    for (int eps : {1, -1}) EXPECT_TRUE(fusion::srg_feasible(fusion::srg_params(q, eps))) << q << " " << eps;
  EXPECT_FALSE(fusion::srg_feasible({10, 3, 1, 1}));
}

TEST(Srg, GraphsAtQ4AreStronglyRegular) {
  const auto b = over_square(4);
  const auto fused = fusion::five_class_fusion(b.cc, *b.K, Merge::srg);
  for (int eps : {1, -1}) {
    const auto g = fusion::srg_graph(fused, eps);
    std::string why;
    const auto p = fusion::verify_srg(g, &why);
    ASSERT_TRUE(p.has_value()) << why;
    EXPECT_EQ(*p, fusion::srg_params(4, eps));
  }
}

TEST(Srg, QTwoElliptic) {
  // q = 2: the elliptic graph has v = 6, k = 3 * 1 = 3.
  const auto p = fusion::srg_params(2, -1);
  EXPECT_EQ(p.v, 6);
  const auto b = over_square(2);
  const auto fused = fusion::five_class_fusion(b.cc, *b.K, Merge::srg);
  const auto g = fusion::srg_graph(fused, -1);
  EXPECT_EQ(g.n, 6u);
  const auto got = fusion::verify_srg(g);
  ASSERT_TRUE(got.has_value());
  EXPECT_EQ(got->k, p.k);
}

TEST(Srg, VerifierRejectsAPath) {
  fusion::Graph g;
  g.n = 3;
  g.adj = {{1}, {0, 2}, {1}};
  std::string why;
  EXPECT_FALSE(fusion::verify_srg(g, &why).has_value());
  EXPECT_FALSE(why.empty());
}

TEST(Srg, EdgelistFormat) {
  fusion::Graph g;
  g.n = 3;
  g.adj = {{1, 2}, {0, 2}, {0, 1}};
  EXPECT_EQ(fusion::edgelist(g), "# vertices 3\n# edges 3\n0 1\n0 2\n1 2\n");
}

TEST(Eigenmatrices, ClosedFormsAreInverse) {
  for (std::int64_t q : {4, 8, 16}) {
    const auto [P, Q] = fusion::elliptic_fusion_eigenmatrices(q);
    const std::int64_t v = q * q * (q * q - 1) / 2;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        std::int64_t s = 0;
        for (int k = 0; k < 4; ++k) s += P[i][k] * Q[k][j];
        EXPECT_EQ(s, i == j ? v : 0) << q;
      }
  }
}

TEST(Eigenmatrices, NumericMatchesClosedFormAtQ4) {
  const std::int64_t q = 4;
  const auto b = over_square(q);
  const auto fused = fusion::five_class_fusion(b.cc, *b.K, Merge::five);
  const auto scheme = cc::restrict_fibre(fused, *fused.fibre_of_sign(-1));
  // On elliptic lines class 4 is empty and class 5 leaves the fibre.
  ASSERT_EQ(scheme.num_relations(), 4u);
  const auto sd = cc::spectral(scheme);
  ASSERT_TRUE(sd.ok) << sd.error;
  EXPECT_LT(sd.residual, 1e-6);
  const auto [P, Q] = fusion::elliptic_fusion_eigenmatrices(q);
  const auto order = fusion::match_rows(sd.P, P);
  ASSERT_TRUE(order.has_value());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(sd.multiplicity[(*order)[i]], static_cast<std::uint32_t>(Q[0][i]));
}

TEST(Eigenmatrices, MatchRowsRejectsAPerturbedRow) {
  const auto [P, Q] = fusion::elliptic_fusion_eigenmatrices(4);
  (void)Q;
  std::vector<std::vector<double>> numeric;
  for (auto it = P.rbegin(); it != P.rend(); ++it) numeric.emplace_back(it->begin(), it->end());
  const auto order = fusion::match_rows(numeric, P);
  ASSERT_TRUE(order.has_value());
  EXPECT_EQ(*order, (std::vector<std::size_t>{3, 2, 1, 0}));
  numeric[1][2] += 1e-3;
  EXPECT_FALSE(fusion::match_rows(numeric, P).has_value());
}
