#include <gtest/gtest.h>

#include <set>

#include "conic/projconic.hpp"

using namespace conic;
using geom::LineType;
using gf::Elem;
using gf::ProjElem;

namespace {

geom::Conic conic_q(std::uint32_t q) {
  auto pp = gf::prime_power(q).value();
  return geom::Conic(gf::Field::make(pp.first, pp.second));
}

// Number of points of O_q lying on the line, counted by substitution.
int conic_points_on(const geom::Conic& C, const geom::Triple& l) {
  const auto& F = *C.field();
  int n = 0;
  for (const Elem t : F.elements()) {
    const Elem v = F.add(F.add(F.mul(l[0], t), F.mul(l[1], F.square(t))), l[2]);
    n += v.index == 0;
  }
  n += l[1].index == 0;  // (0,1,0)
  return n;
}

}  // namespace

TEST(ConicPoint, Examples) {
  auto C = conic_q(4);
  const auto& E = *C.ext();
  EXPECT_EQ(C.conic_point(ProjElem::of(E.zero())), (geom::Triple{E.zero(), E.zero(), E.one()}));
  EXPECT_EQ(C.conic_point(ProjElem::inf()), (geom::Triple{E.zero(), E.one(), E.zero()}));
  const Elem w = E.embed(Elem{2});
  EXPECT_EQ(C.conic_point(ProjElem::of(w)), (geom::Triple{E.one(), w, E.square(w)}));
}

TEST(TangentLine, EvenQPassesThroughNucleus) {
  auto C = conic_q(8);
  const auto& E = *C.ext();
  EXPECT_EQ(C.tangent_line(ProjElem::inf()), (geom::Triple{E.zero(), E.zero(), E.one()}));
  EXPECT_EQ(C.tangent_line(ProjElem::of(E.one())), (geom::Triple{E.zero(), E.one(), E.one()}));
  for (const auto t : C.ext_parameters()) EXPECT_EQ(C.tangent_line(t)[0], E.zero());
}

TEST(TangentLine, MeetsConicOnlyAtTouchPoint) {
  for (std::uint32_t q : {3u, 4u, 5u, 7u}) {
    auto C = conic_q(q);
    const auto& F = *C.field();
    for (const Elem x : F.elements()) {
      const auto t = C.tangent_line(ProjElem::of(C.ext()->embed(x)));
      geom::Triple l{C.ext()->to_base(t[0]), C.ext()->to_base(t[1]), C.ext()->to_base(t[2])};
      EXPECT_EQ(C.classify(l), LineType::tangent);
      const auto p = C.conic_point(ProjElem::of(C.ext()->embed(x)));
      const auto& E = *C.ext();
      EXPECT_EQ(E.add(E.add(E.mul(t[0], p[0]), E.mul(t[1], p[1])), E.mul(t[2], p[2])), E.zero());
    }
  }
}

TEST(Classify, Examples) {
  auto C = conic_q(4);
  const Elem z{0}, o{1}, w{2};
  EXPECT_EQ(C.classify({o, z, z}), LineType::hyperbolic);
  EXPECT_EQ(C.classify({z, z, o}), LineType::tangent);
  EXPECT_EQ(C.classify({o, o, w}), LineType::elliptic);
  EXPECT_THROW(C.classify({z, z, z}), std::invalid_argument);
}

TEST(Classify, AgreesWithPointCount) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    auto C = conic_q(q);
    const auto ls = C.enumerate_lines();
    int tangents = 0;
    for (const auto& l : ls.all) {
      const int n = conic_points_on(C, l);
      ASSERT_LE(n, 2);
      const LineType want = n == 2 ? LineType::hyperbolic : n == 1 ? LineType::tangent : LineType::elliptic;
      ASSERT_EQ(C.classify(l), want);
      tangents += n == 1;
    }
    EXPECT_EQ(tangents, static_cast<int>(q + 1));
  }
}

TEST(Intersect, Examples) {
  auto C = conic_q(4);
  const auto& E = *C.ext();
  const Elem z{0}, o{1}, w{2};
  auto m = C.intersect({o, z, z});
  EXPECT_EQ(m[0], ProjElem::of(E.zero()));
  EXPECT_TRUE(m[1].infinite);
  m = C.intersect({o, z, o});
  EXPECT_EQ(m[0], ProjElem::of(E.one()));
  EXPECT_TRUE(m[1].infinite);
  m = C.intersect({o, o, w});
  EXPECT_FALSE(E.in_base(m[0].value));
  EXPECT_EQ(E.relative_frobenius(m[0].value), m[1].value);
  EXPECT_THROW(C.intersect({z, z, o}), std::invalid_argument);
}

TEST(EnumerateLines, Counts) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 16u}) {
    auto C = conic_q(q);
    const auto ls = C.enumerate_lines();
    EXPECT_EQ(ls.all.size(), q * q + q + 1);
    EXPECT_EQ(ls.lines.size(), q * q);
    EXPECT_EQ(ls.hyperbolic.size(), q * (q + 1) / 2);
    EXPECT_EQ(ls.elliptic.size(), q * (q - 1) / 2);
  }
}

TEST(EnumerateLines, IntersectionIsBijectionOntoPairs) {
  for (std::uint32_t q : {3u, 4u, 5u, 8u}) {
    auto C = conic_q(q);
    const auto& E = *C.ext();
    const auto ls = C.enumerate_lines();
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    auto code = [](ProjElem p) { return p.infinite ? ~0ull : p.value.index; };
    for (const auto& l : ls.lines) {
      ASSERT_NE(l.meets[0], l.meets[1]);
      const bool real = (l.meets[0].infinite || E.in_base(l.meets[0].value)) &&
                        (l.meets[1].infinite || E.in_base(l.meets[1].value));
      EXPECT_EQ(real, l.type == LineType::hyperbolic);
      if (!real) EXPECT_EQ(E.relative_frobenius(l.meets[0].value), l.meets[1].value);
      seen.insert({code(l.meets[0]), code(l.meets[1])});
      // Points really lie on the line.
      for (const auto t : l.meets) {
        const auto p = C.conic_point(t);
        const auto m = C.lift(l.coords);
        ASSERT_EQ(E.add(E.add(E.mul(m[0], p[0]), E.mul(m[1], p[1])), E.mul(m[2], p[2])), E.zero());
      }
    }
    EXPECT_EQ(seen.size(), ls.lines.size());
  }
}

TEST(EnumerateLines, EvenRepresentativeHasLeadingOne) {
  auto C = conic_q(8);
  for (const auto& l : C.enumerate_lines().lines) EXPECT_EQ(l.coords[0], Elem{1});
}

TEST(IsReal, Examples) {
  auto C = conic_q(4);
  const auto& E = *C.ext();
  EXPECT_TRUE(C.is_real(C.conic_point(ProjElem::of(E.embed(Elem{2})))));
  int real = 0;
  for (const auto t : C.ext_parameters()) real += C.is_real(C.conic_point(t));
  EXPECT_EQ(real, 5);
  EXPECT_FALSE(C.is_real(C.conic_point(ProjElem::of(Elem{4}))));
}

TEST(LinesCsv, HeaderAndRows) {
  auto C = conic_q(2);
  const auto csv = geom::lines_csv(C.enumerate_lines());
  EXPECT_EQ(csv.rfind("index,z,x,y,type\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}
