#include <doctest.h>

#include <htva/conformal.hpp>
#include <htva/parser.hpp>

#include "testkit.hpp"

using namespace htva;

namespace {

const HPoly kH = HPoly::monomial(Rational(1), 1);

Rational quartic_of(const BRSTContext& ctx, const FockState& omega) {
  auto r = virasoro_check(ctx.vctx, omega);
  INFO(r.mismatches.size());
  CHECK(r.quartic_scalar);
  CHECK(r.cubic_zero);
  CHECK(r.quadratic_matches);
  CHECK(r.linear_matches);
  CHECK(r.no_higher_poles);
  return r.quartic;
}

// [omega_(m+1), g_(n)] on s
FockState commutator(const BRSTContext& ctx, const FockState& omega, Generator g, long m, long n, const FockState& s) {
  return field_mode(ctx.vctx, omega, m + 1, apply_mode(ctx.vctx, g, n, s)) -
         apply_mode(ctx.vctx, g, n, field_mode(ctx.vctx, omega, m + 1, s));
}

}  // namespace

TEST_CASE("component vectors") {
  auto ctx = BRSTContext::make(testkit::a1());
  CHECK(omega_heisenberg(ctx) == parse_element("1/4 c1[-1]*c1[-1]", ctx.vctx));
  CHECK(omega_betagamma(ctx, Rational(1, 2), 0) ==
        parse_element("1/2 x1[-2]*y1[-1] - 1/2 x1[-1]*y1[-2]", ctx.vctx));
  CHECK(omega_fermion(ctx) == parse_element("psi*1[-2]*psi1[-1]", ctx.vctx));
  auto t = BRSTContext::make(testkit::three_site());
  CHECK(omega_heisenberg(t) ==
        parse_element("1/3 c1[-1]*c1[-1] - 1/3 c1[-1]*c2[-1] + 1/3 c2[-1]*c2[-1]", t.vctx));
}

TEST_CASE("conformal vector") {
  auto ctx = BRSTContext::make(testkit::a1());
  auto cv = build_omega(ctx, {Rational(0), Rational(0)});
  CHECK(cv.central_charge == -3);
  CHECK(differential(ctx, cv.state).is_zero());
  CHECK(quartic_of(ctx, cv.state) == Rational(-3, 2));
  CHECK_NOTHROW(build_omega(ctx, {Rational(1), Rational(-1)}));
  CHECK_THROWS_AS(build_omega(ctx, {Rational(1), Rational(0)}), InputError);
  CHECK_THROWS_AS(build_omega(ctx, {Rational(0)}), InputError);

  auto t = BRSTContext::make(testkit::three_site());
  auto ct = build_omega(t, RatVec(3));
  CHECK(ct.central_charge == -5);
  CHECK(quartic_of(t, ct.state) == Rational(-5, 2));
}

TEST_CASE("shifted conformal vector") {
  auto ctx = BRSTContext::make(testkit::a1());
  auto cv = build_omega(ctx, {Rational(1), Rational(-1)});
  auto r = virasoro_check(ctx.vctx, cv.state);
  CHECK(r.quartic_scalar);
  CHECK(r.cubic_zero);
  CHECK(r.quadratic_matches);
  CHECK(r.linear_matches);
  // each pair contributes 6 lambda_k^2 - 1/2
  CHECK(r.quartic == Rational(-3, 2) + 12);
}

TEST_CASE("component quartics") {
  for (const auto& in : testkit::examples()) {
    auto ctx = BRSTContext::make(in);
    CHECK(quartic_of(ctx, omega_heisenberg(ctx)) == ratio(in.M, 2));
    CHECK(quartic_of(ctx, kH * omega_fermion(ctx)) == -in.M);
    for (int j = 0; j < in.N; ++j) {
      CHECK(quartic_of(ctx, kH * omega_betagamma(ctx, Rational(1, 2), j)) == Rational(-1, 2));
      // 6 kappa^2 - 6 kappa + 1
      CHECK(quartic_of(ctx, kH * omega_betagamma(ctx, Rational(0), j)) == 1);
      CHECK(quartic_of(ctx, kH * omega_betagamma(ctx, Rational(1), j)) == 1);
      CHECK(quartic_of(ctx, kH * omega_betagamma(ctx, Rational(1, 3), j)) == Rational(-1, 3));
    }
  }
}

TEST_CASE("beta-gamma commutators follow the weight law") {
  auto ctx = BRSTContext::make(testkit::a1());
  auto states = spanning_monomials(ctx, 2);
  for (Rational kappa : {Rational(0), Rational(1, 2), Rational(1)}) {
    auto omega = omega_betagamma(ctx, kappa, 0);
    for (long m = -2; m <= 2; ++m)
      for (long n = -2; n <= 2; ++n)
        for (const auto& mono : states) {
          auto s = FockState::of(mono);
          // x has weight kappa, y has weight 1 - kappa
          CHECK(commutator(ctx, omega, {Kind::X, 0}, m, n, s) ==
                HPoly::monomial(-(kappa * (m + 1) + n), 1) * apply_mode(ctx.vctx, {Kind::X, 0}, m + n, s));
          CHECK(commutator(ctx, omega, {Kind::Y, 0}, m, n, s) ==
                HPoly::monomial(-((1 - kappa) * (m + 1) + n), 1) * apply_mode(ctx.vctx, {Kind::Y, 0}, m + n, s));
          CHECK(commutator(ctx, omega, {Kind::X, 1}, m, n, s).is_zero());
        }
  }
}

TEST_CASE("clifford commutators follow the weight law") {
  auto ctx = BRSTContext::make(testkit::a1());
  auto omega = omega_fermion(ctx);
  for (long m = -2; m <= 2; ++m)
    for (long n = -2; n <= 2; ++n)
      for (const auto& mono : spanning_monomials(ctx, 2)) {
        auto s = FockState::of(mono);
        CHECK(commutator(ctx, omega, {Kind::PsiStar, 0}, m, n, s) ==
              HPoly::monomial(Rational(-(m + n + 1)), 1) * apply_mode(ctx.vctx, {Kind::PsiStar, 0}, m + n, s));
        CHECK(commutator(ctx, omega, {Kind::Psi, 0}, m, n, s) ==
              HPoly::monomial(Rational(-n), 1) * apply_mode(ctx.vctx, {Kind::Psi, 0}, m + n, s));
      }
}

TEST_CASE("heisenberg commutator lemma") {
  for (const auto& in : testkit::examples()) {
    auto ctx = BRSTContext::make(in);
    auto r = commutator_lemma_check(ctx, LemmaKind::Heis, -3, 3, -3, 3, Rational(0), 4);
    CHECK(r.checks > 0);
    CHECK(r.failures == 0);
  }
}

TEST_CASE("stated beta-gamma and clifford lemmas disagree with the engine") {
  auto ctx = BRSTContext::make(testkit::a1());
  auto bg = commutator_lemma_check(ctx, LemmaKind::BetaGamma, -1, 1, -1, 1, Rational(1, 2), 2);
  CHECK(bg.failures > 0);
  REQUIRE_FALSE(bg.mismatches.empty());
  auto cl = commutator_lemma_check(ctx, LemmaKind::Clifford, -1, 1, -1, 1, Rational(0), 2);
  CHECK(cl.failures > 0);
}

TEST_CASE("fermion vector differential") {
  for (const auto& in : testkit::examples()) {
    auto ctx = BRSTContext::make(in);
    FockState expected;
    for (int i = 0; i < in.M; ++i)
      expected -= kH * nth_product(ctx.vctx, ctx.comoments[i], FockState::mode(Kind::PsiStar, i, 2), -1);
    CHECK(differential(ctx, kH * omega_fermion(ctx)) == expected);
  }
}

TEST_CASE("radical center") {
  CHECK_FALSE(radical_center_check(BRSTContext::make(testkit::a1())).has_value());
  auto ctx = BRSTContext::make(testkit::a1(), IntMat{{0}});
  auto r = radical_center_check(ctx, 4);
  REQUIRE(r.has_value());
  CHECK(r->zeta == FockState::mode(Kind::C, 0, 1));
  CHECK(r->annihilates);
  CHECK_THROWS_AS(build_omega(ctx, {Rational(0), Rational(0)}), DomainError);
}
