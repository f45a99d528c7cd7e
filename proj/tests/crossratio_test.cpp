#include <gtest/gtest.h>

#include <random>

#include "conic/crossratio.hpp"

using namespace conic;
using gf::Elem;
using gf::ProjElem;
using geom::LineType;

namespace {

geom::Conic conic_q(std::uint32_t q) {
  auto pp = gf::prime_power(q).value();
  return geom::Conic(gf::Field::make(pp.first, pp.second));
}

std::vector<ProjElem> line_points(const gf::Field& F) {
  std::vector<ProjElem> out;
  for (const Elem e : F.elements()) out.push_back(ProjElem::of(e));
  out.push_back(ProjElem::inf());
  return out;
}

// Rational formula (a-c)(b-d)/((a-d)(b-c)) on finite, pairwise suitable input.
ProjElem rational(const gf::Field& F, Elem a, Elem b, Elem c, Elem d) {
  const Elem num = F.mul(F.sub(a, c), F.sub(b, d));
  const Elem den = F.mul(F.sub(a, d), F.sub(b, c));
  if (den.index == 0) return ProjElem::inf();
  return ProjElem::of(F.div(num, den));
}

}  // namespace

TEST(CrossRatio, Examples) {
  auto F = gf::Field::make(2, 3);
  const ProjElem inf = ProjElem::inf(), zero = ProjElem::of(F->zero()), one = ProjElem::of(F->one());
  for (const Elem d : F->elements()) {
    if (d.index <= 1) continue;
    EXPECT_EQ(cross::cross_ratio(*F, inf, zero, one, ProjElem::of(d)), ProjElem::of(d));
  }
  const ProjElem a = ProjElem::of(Elem{3}), c = ProjElem::of(Elem{5}), d = ProjElem::of(Elem{6});
  EXPECT_EQ(cross::cross_ratio(*F, a, a, c, d), one);
  EXPECT_THROW(cross::cross_ratio(*F, a, a, a, d), std::invalid_argument);
}

TEST(CrossRatio, MatchesRationalFormulaAndSymmetries) {
  for (auto [p, n] : {std::pair{2u, 2u}, std::pair{5u, 1u}, std::pair{3u, 2u}}) {
    auto F = gf::Field::make(p, n);
    const auto pts = line_points(*F);
    for (const auto a : pts)
      for (const auto b : pts)
        for (const auto c : pts)
          for (const auto d : pts) {
            if ((a == b && b == c) || (a == b && b == d) || (a == c && c == d) || (b == c && c == d)) continue;
            const auto r = cross::cross_ratio(*F, a, b, c, d);
            if (!a.infinite && !b.infinite && !c.infinite && !d.infinite && !(a == d && b == c) &&
                !((a == c || b == d) && (a == d || b == c)))
              ASSERT_EQ(r, rational(*F, a.value, b.value, c.value, d.value));
            ASSERT_EQ(cross::cross_ratio(*F, b, a, d, c), r);
            ASSERT_EQ(cross::cross_ratio(*F, a, b, d, c), cross::inverse(*F, r));
          }
  }
}

TEST(FReduce, ConventionsAndInversionInvariance) {
  for (std::uint32_t q : {8u, 7u}) {
    auto pp = gf::prime_power(q).value();
    auto F = gf::Field::make(pp.first, pp.second);
    EXPECT_TRUE(cross::f_reduce(*F, ProjElem::of(F->one())).infinite);
    EXPECT_EQ(cross::f_reduce(*F, ProjElem::of(F->zero())), cross::f_reduce(*F, ProjElem::inf()));
    for (const auto x : line_points(*F))
      EXPECT_EQ(cross::f_reduce(*F, x), cross::f_reduce(*F, cross::inverse(*F, x)));
  }
  auto F7 = gf::Field::make(7, 1);
  EXPECT_EQ(cross::f_reduce(*F7, ProjElem::inf()), ProjElem::of(F7->inv(F7->from_int(4))));
  EXPECT_EQ(cross::f_reduce(*F7, ProjElem::of(F7->from_int(-1))), ProjElem::of(F7->zero()));
}

TEST(FReduce, TraceClassOfB0AndB1) {
  auto C = conic_q(8);
  const auto& E = *C.ext();
  const auto K = gf::classes(C.field());
  for (const Elem x : E.elements()) {
    const auto px = ProjElem::of(x);
    if (x.index == 0) continue;
    const auto f = cross::f_reduce(E, px);
    if (cross::in_b0(C, px)) EXPECT_TRUE(K.in_t0(E.to_base(f.value)));
    if (cross::in_b1(C, px)) EXPECT_TRUE(K.in_t1(E.to_base(f.value)));
  }
}

TEST(RhoHat, Examples) {
  auto C = conic_q(4);
  const Elem z{0}, o{1}, w{2};
  EXPECT_EQ(cross::rho_hat_coords(C, {o, z, z}, {o, z, o}), z);
  EXPECT_EQ(cross::rho_hat_points(C, C.make_line({o, z, z}), C.make_line({o, z, o})), z);
  EXPECT_EQ(cross::rho_hat_coords(C, {o, o, o}, {o, w, w}), w);
  EXPECT_EQ(cross::rho_hat_points(C, C.make_line({o, o, o}), C.make_line({o, w, w})), w);
  EXPECT_THROW(cross::rho_hat_points(C, C.make_line({o, o, o}), C.make_line({o, o, o})), std::invalid_argument);
  EXPECT_THROW(cross::rho_hat_points(C, C.make_line({z, z, o}), C.make_line({o, o, o})), std::invalid_argument);
}

TEST(RhoHat, TranslatedDiagonalLines) {
  auto C = conic_q(8);
  const auto& F = *C.field();
  for (const Elem v : F.elements())
    for (const Elem c : F.elements()) {
      if (c.index == 0) continue;
      const Elem u = F.add(v, c);
      const geom::Triple l{F.one(), v, v}, m{F.one(), u, u};
      if (C.classify(l) == LineType::tangent || C.classify(m) == LineType::tangent) continue;
      EXPECT_EQ(cross::rho_hat_points(C, C.make_line(l), C.make_line(m)), F.square(c));
    }
}

TEST(RhoHat, MeetingOnConicGivesZero) {
  auto C = conic_q(8);
  const auto ls = C.enumerate_lines();
  for (const auto& l : ls.lines)
    for (const auto& m : ls.lines) {
      if (l.coords == m.coords) continue;
      const bool share = l.meets[0] == m.meets[0] || l.meets[0] == m.meets[1] || l.meets[1] == m.meets[0] ||
                         l.meets[1] == m.meets[1];
      EXPECT_EQ(cross::rho_hat_points(C, l, m).index == 0, share);
    }
}

class RhoHatOracle : public ::testing::TestWithParam<std::uint32_t> {};

TEST_P(RhoHatOracle, CoordinatesEqualPoints) {
  auto C = conic_q(GetParam());
  const auto ls = C.enumerate_lines();
  for (const auto& l : ls.lines)
    for (const auto& m : ls.lines) {
      if (l.coords == m.coords) continue;
      const Elem a = cross::rho_hat_points(C, l, m);
      ASSERT_EQ(a, cross::rho_hat_coords(C, l.coords, m.coords));
      ASSERT_EQ(a, cross::rho_hat_points(C, m, l));
    }
}

INSTANTIATE_TEST_SUITE_P(AllFields, RhoHatOracle, ::testing::Values(2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u));

TEST(LineCrossRatio, TypeDeterminesB0OrB1) {
  for (std::uint32_t q : {3u, 4u, 5u, 7u, 8u}) {
    auto C = conic_q(q);
    const auto ls = C.enumerate_lines();
    for (const auto& l : ls.lines)
      for (const auto& m : ls.lines) {
        if (l.coords == m.coords) continue;
        const auto r = cross::line_cross_ratio(C, l, m);
        EXPECT_LE(r.pair[0] < r.pair[1] || r.pair[0] == r.pair[1], true);
        if (l.type == m.type)
          ASSERT_TRUE(cross::in_b0(C, r.value));
        else
          ASSERT_TRUE(cross::in_b1(C, r.value));
      }
  }
}

TEST(TypeFromRhoHat, EvenQ) {
  auto C = conic_q(8);
  const auto ls = C.enumerate_lines();
  EXPECT_EQ(cross::type_from_rho_hat(C, Elem{0}, LineType::hyperbolic), LineType::hyperbolic);
  EXPECT_FALSE(cross::type_from_rho_hat(C, Elem{0}, LineType::elliptic).has_value());
  for (const auto& l : ls.lines)
    for (const auto& m : ls.lines) {
      if (l.coords == m.coords) continue;
      const auto c = cross::rho_hat_points(C, l, m);
      EXPECT_EQ(cross::type_from_rho_hat(C, c, l.type), m.type);
    }
  EXPECT_THROW(cross::type_from_rho_hat(conic_q(5), Elem{1}, LineType::hyperbolic), std::invalid_argument);
}
