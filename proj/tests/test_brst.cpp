#include <doctest.h>

#include <htva/brst.hpp>
#include <htva/parser.hpp>

#include "testkit.hpp"

using namespace htva;

namespace {

FockState expected_dc(const BRSTContext& ctx, int i) {
  FockState out;
  for (int j = 0; j < ctx.input.M; ++j)
    out += HPoly::monomial(Rational(-ctx.vctx.gram[i][j]), 1) * FockState::mode(Kind::PsiStar, j, 2);
  return out;
}

}  // namespace

TEST_CASE("chiral comoment") {
  auto ctx = BRSTContext::make(testkit::a1());
  CHECK(ctx.comoments[0] == parse_element("x1[-1]*y1[-1] + x2[-1]*y2[-1] - c1[-1]", ctx.vctx));
  Gradings g = gradings(ctx.comoments[0]);
  CHECK(g.homogeneous);
  CHECK(g.conf2 == 2);
  CHECK(g.s2 == 2);
  CHECK(g.ghost == 0);
  auto t = BRSTContext::make(testkit::three_site());
  CHECK(t.comoments[1] == parse_element("x2[-1]*y2[-1] + x3[-1]*y3[-1] - c2[-1]", t.vctx));
  CHECK_THROWS_AS(chiral_comoment(t, 2), InputError);
}

TEST_CASE("differential on generators") {
  for (const auto& in : testkit::examples()) {
    auto ctx = BRSTContext::make(in);
    CHECK(differential(ctx, FockState::vacuum()).is_zero());
    for (int i = 0; i < in.M; ++i) {
      CHECK(differential(ctx, FockState::mode(Kind::C, i, 1)) == expected_dc(ctx, i));
      CHECK(differential(ctx, FockState::mode(Kind::Psi, i, 1)) == ctx.comoments[i]);
      CHECK(differential(ctx, FockState::mode(Kind::PsiStar, i, 1)).is_zero());
    }
  }
}

TEST_CASE("differential agrees with the charge and its split") {
  auto ctx = BRSTContext::make(testkit::three_site());
  auto a = parse_element("psi1[-1]*x1[-2]*y3[-1] + h c2[-2]*psi*1[-1]*psi2[-1]", ctx.vctx);
  CHECK(differential(ctx, a) == differential_from_charge(ctx, a));
  auto [p, m] = differential_split(ctx, a);
  CHECK(p + m == differential(ctx, a));
  CHECK(differential(ctx, differential(ctx, a)).is_zero());
}

TEST_CASE("complex sweep, A1") {
  auto ctx = BRSTContext::make(testkit::a1());
  auto r = complex_check(ctx, 4, 6);
  CHECK(r.monomials > 0);
  CHECK(r.d_squared_zero());
  CHECK(r.quantum_consistent());
  CHECK(r.classical_consistent());
  CHECK(r.negative_ghost_vanishing());
  CHECK(r.mismatches.empty());
}

TEST_CASE("complex sweep, three sites") {
  auto ctx = BRSTContext::make(testkit::three_site());
  auto r = complex_check(ctx, 4, 6);
  CHECK(r.d_squared_zero());
  CHECK(r.quantum_consistent());
  CHECK(r.classical_consistent());
  CHECK(r.negative_ghost_vanishing());
  CHECK_FALSE(r.negative_ghost_dims.empty());
}

TEST_CASE("graded pieces") {
  auto ctx = BRSTContext::make(testkit::a1());
  CHECK(basis_of_piece(ctx, 1, 1, 0, false).basis.size() == 4);
  CHECK(cohomology(ctx, 0, 0, 0).dim_H == 1);
  CHECK(cohomology(ctx, 1, 1, 0).dim_H == 0);
  auto h = cohomology(ctx, 2, 2, 0);
  CHECK(h.dim_H == 3);
  for (const auto& s : h.basis_of_H) CHECK(differential(ctx, s).is_zero());
  CHECK(enumerate_monomials(ctx, 0, 1).size() == 1);
  CHECK(enumerate_monomials(ctx, 0, -1).empty());
}

TEST_CASE("ghost-0 dimensions match the jet oracle") {
  auto golden = testkit::load_golden();
  for (const auto& [in, name] : {std::pair{testkit::a1(), "A1"}, std::pair{testkit::three_site(), "three_site"}}) {
    auto ctx = BRSTContext::make(in);
    auto bad = testkit::compare_h0(ctx, testkit::golden_example(golden, name));
    INFO(name);
    CHECK(bad.empty());
  }
}

TEST_CASE("closed generators") {
  for (const auto& in : testkit::examples()) {
    auto ctx = BRSTContext::make(in);
    for (const auto& g : closed_generators(ctx, std::nullopt)) CHECK(differential(ctx, g.state).is_zero());
    for (int k = 0; k < in.N; ++k) CHECK(differential(ctx, h_tilde(ctx, k)).is_zero());
    for (const auto& z : lattice_lambda0(in)) {
      IntVec neg(z.size());
      for (size_t k = 0; k < z.size(); ++k) neg[k] = -z[k];
      CHECK(differential(ctx, p_tilde(ctx, z)).is_zero());
      CHECK(differential(ctx, p_tilde(ctx, neg)).is_zero());
    }
  }
  auto ctx = BRSTContext::make(testkit::a1());
  auto charts = enumerate_charts(ctx.input);
  CHECK(chart_b(ctx, charts[0], 0) == parse_element("c1[-1] + 2 h x1[-1]^-1*x1[-2]", ctx.vctx));
  CHECK(chart_astar(ctx, charts[0], 1) == parse_element("x1[-1]^-1*x2[-1]", ctx.vctx));
  CHECK(chart_a(ctx, charts[0], 1) == parse_element("x1[-1]*y2[-1]", ctx.vctx));
  CHECK_THROWS_AS(chart_a(ctx, charts[0], 0), InputError);
}

TEST_CASE("chart identities") {
  for (const auto& in : testkit::examples()) {
    auto ctx = BRSTContext::make(in);
    for (const auto& c : enumerate_charts(in)) {
      auto r = chart_check(ctx, c);
      INFO(r.mismatches.size());
      CHECK(r.ok());
      CHECK(r.ope_checks > 0);
    }
  }
}

TEST_CASE("cohomology classes are closed under the (-1)-product") {
  auto ctx = BRSTContext::make(testkit::a1());
  auto h = cohomology(ctx, 2, 2, 0).basis_of_H;
  for (const auto& a : h)
    for (const auto& b : h) CHECK(differential(ctx, nth_product(ctx.vctx, a, b, -1)).is_zero());
}
