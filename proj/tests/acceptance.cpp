#include <htva/conformal.hpp>
#include <htva/zhu.hpp>

#include "testkit.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace htva;

namespace {

struct Example {
  std::string name;
  BRSTContext ctx;
};

std::vector<Example> examples() {
  return {{"A1", BRSTContext::make(testkit::a1())}, {"three_site", BRSTContext::make(testkit::three_site())}};
}

const HPoly kH = HPoly::monomial(Rational(1), 1);

using Detail = std::ostringstream;

bool quartic_is(const BRSTContext& ctx, const FockState& omega, const Rational& expected, const std::string& label,
                Detail& d) {
  auto r = virasoro_check(ctx.vctx, omega);
  bool ok = r.ok(expected);
  if (!ok) d << " " << label << " quartic " << to_string(r.quartic) << " expected " << to_string(expected) << ";";
  return ok;
}

bool c1_d_squared(Detail& d) {
  bool ok = true;
  for (auto& e : examples()) {
    auto r = complex_check(e.ctx, 4, 6);
    d << " " << e.name << ": " << r.monomials << " monomials, " << r.d_squared_failures << " failures;";
    ok = ok && r.d_squared_zero();
  }
  return ok;
}

bool c2_classical(Detail& d) {
  bool ok = true;
  for (auto& e : examples()) {
    auto r = complex_check(e.ctx, 4, 6);
    d << " " << e.name << ": " << r.classical_failures << "+" << r.classical_square_failures << "+"
      << r.split_failures << "+" << r.charge_failures << " failures;";
    ok = ok && r.classical_consistent() && r.quantum_consistent() && r.monomials > 0;
  }
  return ok;
}

bool c3_negative_ghost(Detail& d) {
  bool ok = true;
  for (auto& e : examples()) {
    auto r = complex_check(e.ctx, 4, 6, false);
    d << " " << e.name << ": " << r.negative_ghost_dims.size() << " pieces;";
    ok = ok && !r.negative_ghost_dims.empty() && r.negative_ghost_vanishing();
  }
  return ok;
}

bool c4_comoment_ope(Detail& d) {
  bool ok = true;
  int pairs = 0;
  for (auto& e : examples())
    for (const auto& a : e.ctx.comoments)
      for (const auto& b : e.ctx.comoments) {
        ++pairs;
        ok = ok && ope(e.ctx.vctx, a, b).empty();
      }
  d << " " << pairs << " pairs;";
  return ok;
}

bool c5_virasoro(Detail& d) {
  bool ok = true;
  for (auto& e : examples()) {
    const auto& in = e.ctx.input;
    auto cv = build_omega(e.ctx, RatVec(in.N));
    ok = quartic_is(e.ctx, cv.state, ratio(-(in.M + in.N), 2), e.name + " total", d) && ok;
    ok = quartic_is(e.ctx, omega_heisenberg(e.ctx), ratio(in.M, 2), e.name + " heis", d) && ok;
    ok = quartic_is(e.ctx, kH * omega_fermion(e.ctx), Rational(-in.M), e.name + " clifford", d) && ok;
    for (Rational kappa : {Rational(0), Rational(1, 2), Rational(1)})
      for (int j = 0; j < in.N; ++j)
        ok = quartic_is(e.ctx, kH * omega_betagamma(e.ctx, kappa, j), Rational(-1, 2),
                        e.name + " betagamma kappa=" + to_string(kappa) + " site " + std::to_string(j + 1), d) &&
             ok;
  }
  return ok;
}

bool c6_lemmas(Detail& d) {
  bool ok = true;
  auto record = [&](const std::string& label, const LemmaReport& r) {
    d << " " << label << " " << r.failures << "/" << r.checks << ";";
    ok = ok && r.checks > 0 && r.failures == 0;
  };
  for (auto& e : examples()) {
    record(e.name + " heis", commutator_lemma_check(e.ctx, LemmaKind::Heis, -3, 3, -3, 3, Rational(0), 4));
    for (Rational kappa : {Rational(0), Rational(1, 2), Rational(1)})
      record(e.name + " betagamma kappa=" + to_string(kappa),
             commutator_lemma_check(e.ctx, LemmaKind::BetaGamma, -3, 3, -3, 3, kappa, 4));
    record(e.name + " clifford", commutator_lemma_check(e.ctx, LemmaKind::Clifford, -3, 3, -3, 3, Rational(0), 4));
  }
  return ok;
}

bool c7_chart_identities(Detail& d) {
  bool ok = true;
  for (auto& e : examples()) {
    const auto& in = e.ctx.input;
    for (int i = 0; i < in.M; ++i) {
      FockState expected;
      for (int j = 0; j < in.M; ++j)
        expected += HPoly::monomial(Rational(-e.ctx.vctx.gram[i][j]), 1) * FockState::mode(Kind::PsiStar, j, 2);
      ok = ok && differential(e.ctx, FockState::mode(Kind::C, i, 1)) == expected;
    }
    int charts = 0, opes = 0;
    for (const auto& c : enumerate_charts(in)) {
      auto r = chart_check(e.ctx, c);
      ++charts;
      opes += r.ope_checks;
      ok = ok && r.ok() && r.ope_checks > 0;
    }
    d << " " << e.name << ": " << charts << " charts, " << opes << " OPEs;";
  }
  return ok;
}

bool c8_h0_oracle(Detail& d) {
  auto golden = testkit::load_golden();
  auto ctx = BRSTContext::make(testkit::a1());
  auto bad = testkit::compare_h0(ctx, testkit::golden_example(golden, "A1"));
  d << " " << testkit::golden_example(golden, "A1")["h0"].size() << " pieces, " << bad.size() << " mismatches;";
  return bad.empty();
}

bool c9_closed_generators(Detail& d) {
  bool ok = true;
  int n = 0;
  for (auto& e : examples()) {
    const auto& in = e.ctx.input;
    for (int k = 0; k < in.N; ++k, ++n) ok = ok && differential(e.ctx, h_tilde(e.ctx, k)).is_zero();
    for (const auto& z : lattice_lambda0(in)) {
      IntVec neg(z.size());
      for (size_t k = 0; k < z.size(); ++k) neg[k] = -z[k];
      ok = ok && differential(e.ctx, p_tilde(e.ctx, z)).is_zero() && differential(e.ctx, p_tilde(e.ctx, neg)).is_zero();
      n += 2;
    }
  }
  d << " " << n << " generators;";
  return ok;
}

bool c10_zhu_weyl(Detail& d) {
  bool ok = true;
  for (auto& e : examples()) {
    auto r = compare_zhu_weyl(e.ctx, 4);
    int eigen = 0;
    for (const auto& c : r.commutators)
      if (c.eigen_checked) {
        ++eigen;
        ok = ok && c.eigen_matches;
      }
    d << " " << e.name << ": " << r.commutators.size() << " commutators, " << eigen << " eigen;";
    ok = ok && r.commutators_ok() && eigen > 0;
  }
  return ok;
}

bool c11_poisson(Detail& d) {
  bool ok = true;
  for (auto& e : examples()) {
    auto r = c2_poisson_check(zhu_setup(e.ctx, 4), 20, 2024);
    d << " " << e.name << ": " << r.pairs << " pairs, " << r.derivative_checks << " derivatives;";
    ok = ok && r.ok() && r.pairs == 20;
  }
  return ok;
}

bool c12_combinatorics(Detail& d) {
  auto golden = testkit::load_golden();
  auto a = testkit::compare_combinatorics(testkit::a1(), testkit::golden_example(golden, "A1"));
  auto t = testkit::compare_combinatorics(testkit::three_site(), testkit::golden_example(golden, "three_site"));
  d << " " << a.size() + t.size() << " mismatches;";
  for (const auto& m : a) d << " A1 " << m << ";";
  for (const auto& m : t) d << " three_site " << m << ";";
  return a.empty() && t.empty();
}

bool c13_properties(Detail& d) {
  bool ok = true;
  uint64_t seed = 1000;
  for (auto& e : examples()) {
    for (const auto& r : testkit::engine_suites(e.ctx, 200, seed)) {
      d << " " << e.name << " " << r.name << " " << r.failures << "/" << r.cases << ";";
      ok = ok && r.ok() && r.cases == 200;
    }
    seed += 10;
  }
  return ok;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(Detail&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"d squared zero", c1_d_squared},
      {"classical and quantum consistency", c2_classical},
      {"negative ghost vanishing", c3_negative_ghost},
      {"comoment OPE triviality", c4_comoment_ope},
      {"Virasoro OPE and component quartics", c5_virasoro},
      {"commutator lemmas", c6_lemmas},
      {"chart identities", c7_chart_identities},
      {"H0 dimension oracle", c8_h0_oracle},
      {"closed generators", c9_closed_generators},
      {"Zhu against Weyl commutators", c10_zhu_weyl},
      {"C2 Poisson structure", c11_poisson},
      {"combinatorics fixtures", c12_combinatorics},
      {"engine property suites", c13_properties},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Detail d;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criteria[i].run(d);
    } catch (const std::exception& e) {
      d << " exception: " << e.what();
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!ok) ++failed;
    std::cout << (ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].name << " (" << s << " s)" << d.str()
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
