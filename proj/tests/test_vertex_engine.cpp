#include <doctest.h>

#include <htva/brst.hpp>
#include <htva/parser.hpp>

#include "testkit.hpp"

using namespace htva;

namespace {

VertexContext a1_vctx() { return BRSTContext::make(testkit::a1()).vctx; }

FockState hbar(int k, const Rational& c = 1) { return FockState::of(Monomial(), HPoly::monomial(c, k)); }

}  // namespace

TEST_CASE("vacuum") {
  FockState v = FockState::vacuum();
  CHECK(translation(v).is_zero());
  Gradings g = gradings(v);
  CHECK(g.homogeneous);
  CHECK(g.conf2 == 0);
  CHECK(g.s2 == 0);
  CHECK(g.ghost == 0);
}

TEST_CASE("apply_mode") {
  auto v = a1_vctx();
  CHECK(apply_mode(v, {Kind::X, 0}, 0, parse_element("y1[-1]", v)) == hbar(1, -1));
  CHECK(apply_mode(v, {Kind::Psi, 0}, 0, parse_element("psi*1[-1]", v)) == hbar(1));
  CHECK(apply_mode(v, {Kind::C, 0}, 2, parse_element("c1[-1]", v)).is_zero());
  CHECK(apply_mode(v, {Kind::C, 0}, 1, parse_element("c1[-1]", v)) == hbar(2, 2));
  CHECK(apply_mode(v, {Kind::X, 0}, 0, parse_element("y2[-1]", v)).is_zero());
  CHECK(apply_mode(v, {Kind::X, 0}, -2, FockState::vacuum()) == FockState::mode(Kind::X, 0, 2));
}

TEST_CASE("nth_product") {
  auto v = a1_vctx();
  auto x1 = parse_element("x1[-1]", v), y1 = parse_element("y1[-1]", v), c1 = parse_element("c1[-1]", v);
  CHECK(nth_product(v, x1, y1, 0) == hbar(1, -1));
  CHECK(nth_product(v, c1, c1, 1) == hbar(2, 2));
  CHECK(nth_product(v, x1, FockState::vacuum(), 0).is_zero());
  CHECK(nth_product(v, x1, FockState::vacuum(), -1) == x1);
  CHECK(nth_product(v, x1, FockState::vacuum(), -2) == translation(x1));
}

TEST_CASE("translation") {
  auto v = a1_vctx();
  CHECK(translation(parse_element("x1[-1]", v)) == parse_element("x1[-2]", v));
  CHECK(translation(parse_element("x1[-2]", v)) == parse_element("2 x1[-3]", v));
  // d(u^-1) = -u^-2 du on a localized mode
  CHECK(translation(parse_element("x1[-1]^-1", v)) == parse_element("-x1[-1]^-2*x1[-2]", v));
}

TEST_CASE("gradings") {
  auto v = a1_vctx();
  Gradings g = gradings(parse_element("x1[-1]*y2[-1]", v));
  CHECK(g.conf2 == 2);
  CHECK(g.s2 == 2);
  CHECK(g.ghost == 0);
  g = gradings(parse_element("psi*1[-1]", v));
  CHECK(g.conf2 == 0);
  CHECK(g.s2 == 0);
  CHECK(g.ghost == 1);
  g = gradings(hbar(1));
  CHECK(g.conf2 == 0);
  CHECK(g.s2 == 2);
  g = gradings(parse_element("x1[-1] + c1[-1]", v));
  CHECK_FALSE(g.homogeneous);
  CHECK(g.distinct.size() == 2);
}

TEST_CASE("ope") {
  auto v = a1_vctx();
  auto r = ope(v, parse_element("x1[-1]", v), parse_element("y1[-1]", v));
  REQUIRE(r.size() == 1);
  CHECK(r[0].first == 1);
  CHECK(r[0].second == hbar(1, -1));
  CHECK(ope(v, parse_element("x1[-1]", v), parse_element("x2[-1]", v)).empty());
  auto ctx = BRSTContext::make(testkit::a1());
  CHECK(ope(v, ctx.comoments[0], ctx.comoments[0]).empty());
  auto cc = ope(v, parse_element("c1[-1]", v), parse_element("c1[-1]", v));
  REQUIRE(cc.size() == 1);
  CHECK(cc[0].first == 2);
}

TEST_CASE("odd nilpotence") {
  auto v = a1_vctx();
  CHECK(parse_element("psi1[-1]*psi1[-1]", v).is_zero());
  CHECK(parse_element("psi*1[-2]*psi*1[-2]", v).is_zero());
  auto p = parse_element("psi*1[-1]", v);
  CHECK(normal_product(p, p).is_zero());
  CHECK(parse_element("psi*1[-1]*psi1[-1]", v) == -parse_element("psi1[-1]*psi*1[-1]", v));
}

TEST_CASE("dlog") {
  auto v = a1_vctx();
  Monomial x1;
  x1.f = {{make_key(Kind::X, 0, 1), 1}};
  CHECK(dlog(x1) == parse_element("x1[-1]^-1*x1[-2]", v));
  Monomial mixed;
  mixed.f = {{make_key(Kind::X, 0, 1), 1}, {make_key(Kind::Y, 1, 1), -1}};
  CHECK(dlog(mixed) == parse_element("x1[-1]^-1*x1[-2] - y2[-1]^-1*y2[-2]", v));
  CHECK(dlog(Monomial()).is_zero());
  Monomial deep;
  deep.f = {{make_key(Kind::X, 0, 2), 1}};
  CHECK_THROWS_AS(dlog(deep), DomainError);
}

TEST_CASE("fock_action") {
  auto v = a1_vctx();
  RatVec lambda{Rational(3, 2)};
  auto b = parse_element("c1[-1]", v);
  CHECK(fock_action(v, b, 0, lambda, FockState::vacuum()) == FockState::of(Monomial(), HPoly(Rational(3, 2))));
  CHECK(fock_action(v, parse_element("x1[-1]", v), 0, lambda, FockState::vacuum()).is_zero());
  CHECK(fock_action(v, parse_element("x1[-1]", v), 2, lambda, FockState::vacuum()).is_zero());
  CHECK(fock_action(v, b, -1, lambda, FockState::vacuum()) == b);
  CHECK(fock_action(v, b, 1, lambda, b) == FockState::of(Monomial(), HPoly(Rational(2))));
  CHECK_THROWS_AS(fock_action(v, parse_element("psi1[-1]", v), 0, lambda, FockState::vacuum()), DomainError);
  CHECK_THROWS_AS(fock_action(v, b, 0, RatVec{}, FockState::vacuum()), InputError);
}

TEST_CASE("hbar_divide") {
  CHECK(hbar_divide(hbar(2), 1) == hbar(1));
  CHECK_THROWS_AS(hbar_divide(FockState::vacuum(), 1), DomainError);
  auto ctx = BRSTContext::make(testkit::a1());
  auto q0 = nth_product(ctx.vctx, ctx.Q, parse_element("c1[-1]", ctx.vctx), 0);
  CHECK(hbar_divide(q0, 1) == differential(ctx, parse_element("c1[-1]", ctx.vctx)));
}

TEST_CASE("parser") {
  auto v = a1_vctx();
  auto s = parse_element("x1[-1]*y1[-1]", v);
  Monomial m;
  m.f = {{make_key(Kind::X, 0, 1), 1}, {make_key(Kind::Y, 0, 1), 1}};
  CHECK(s == FockState::of(m));
  auto t = parse_element("c1[-1] - 1/2 h c1[-1]", v);
  REQUIRE(t.terms.size() == 1);
  CHECK(t.terms.begin()->second == HPoly(1) - HPoly::monomial(Rational(1, 2), 1));
  CHECK(parse_element("x1[-1]*y2[-1] - 1/2 h^2 c1[-2]", v).terms.size() == 2);
  CHECK(parse_element("(x1[-1] + x2[-1])*y1[-1]", v) == parse_element("x1[-1]*y1[-1] + x2[-1]*y1[-1]", v));
  CHECK_THROWS_AS(parse_element("psi*3[-1]", v), InputError);
  CHECK_THROWS_AS(parse_element("x1[-1", v), ParseError);
  CHECK_THROWS_AS(parse_element("x1[-1] +", v), ParseError);
  CHECK_THROWS_AS(parse_element("1/0 x1[-1]", v), ParseError);
  CHECK_THROWS_AS(parse_element("x1[-2]^-1", v), ParseError);
  try {
    parse_element("x1[-1] * q", v);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.position == 9);
  }
}

TEST_CASE("parser round trip") {
  auto ctx = BRSTContext::make(testkit::three_site());
  auto r = testkit::parser_round_trip(ctx, 200, 11);
  CHECK_MESSAGE(r.ok(), r.first_failure);
}
