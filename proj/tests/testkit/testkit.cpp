#include "testkit.hpp"

#include <htva/conformal.hpp>
#include <htva/linalg.hpp>
#include <htva/parser.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

namespace htva::testkit {

using nlohmann::json;

HypertoricInput a1() { return HypertoricInput::make({{1, 1}}, {Rational(1)}); }

HypertoricInput three_site() { return HypertoricInput::make({{1, 0, 1}, {0, 1, 1}}, {Rational(2), Rational(1)}); }

std::vector<HypertoricInput> examples() { return {a1(), three_site()}; }

StateGen::StateGen(const BRSTContext& ctx, uint64_t seed, int max_w2)
    : ctx_(ctx), rng_(seed), pool_(spanning_monomials(ctx, max_w2)) {}

long StateGen::mode(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

Rational StateGen::coefficient() {
  long num = mode(-3, 3);
  if (num == 0) num = 1;
  return ratio(num, mode(1, 2));
}

FockState StateGen::homogeneous() {
  const Monomial& seed = pool_[mode(0, static_cast<long>(pool_.size()) - 1)];
  std::vector<const Monomial*> peers;
  for (const auto& m : pool_)
    if (m.conf2() == seed.conf2() && m.ghost() == seed.ghost()) peers.push_back(&m);
  std::vector<const Monomial*> chosen = {&seed};
  long extra = mode(0, 2);
  for (long i = 0; i < extra; ++i) chosen.push_back(peers[mode(0, static_cast<long>(peers.size()) - 1)]);
  int top = 0;
  for (auto* m : chosen) top = std::max(top, m->intrinsic_s2());
  int s2 = top + 2 * static_cast<int>(mode(0, 1));
  FockState s;
  for (auto* m : chosen) s.add(*m, HPoly::monomial(coefficient(), (s2 - m->intrinsic_s2()) / 2));
  return s;
}

FockState StateGen::mixed() { return homogeneous() + homogeneous(); }

WeylElement StateGen::weyl(int max_degree) {
  int N = ctx_.input.N, M = ctx_.input.M;
  WeylElement w(N, M);
  long terms = mode(1, 3);
  for (long t = 0; t < terms; ++t) {
    std::vector<int> key(2 * N + M, 0);
    long deg = mode(0, max_degree);
    for (long d = 0; d < deg; ++d) ++key[mode(0, 2 * N + M - 1)];
    w.add(key, coefficient());
  }
  return w;
}

namespace {

template <class Body>
PropertyResult run_property(const std::string& name, const BRSTContext& ctx, int cases, uint64_t seed, Body body) {
  PropertyResult r;
  r.name = name;
  StateGen gen(ctx, seed);
  for (int i = 0; i < cases; ++i) {
    std::string what;
    ++r.cases;
    if (!body(gen, &what)) {
      if (r.failures++ == 0) r.first_failure = what;
    }
  }
  return r;
}

int sign_of(int pa, int pb) { return (pa & pb) ? -1 : 1; }

std::string describe(const FockState& a, const FockState& b, long n) {
  return "a=" + to_expression(a) + " b=" + to_expression(b) + " n=" + std::to_string(n);
}

}  // namespace

PropertyResult borcherds_commutator(const BRSTContext& ctx, int cases, uint64_t seed) {
  const VertexContext& v = ctx.vctx;
  return run_property("borcherds commutator", ctx, cases, seed, [&](StateGen& g, std::string* what) {
    FockState a = g.homogeneous(), b = g.homogeneous(), c = g.homogeneous();
    long m = g.mode(-2, 2), n = g.mode(-2, 2);
    int s = sign_of(parity(a), parity(b));
    FockState lhs = field_mode(v, a, m, field_mode(v, b, n, c)) -
                    HPoly(Rational(s)) * field_mode(v, b, n, field_mode(v, a, m, c));
    FockState rhs;
    long top = max_product_index(v, a, b);
    for (long j = 0; j <= top; ++j) {
      FockState ab = nth_product(v, a, b, j);
      if (ab.is_zero()) continue;
      rhs += HPoly(binomial(Rational(m), j)) * field_mode(v, ab, m + n - j, c);
    }
    *what = describe(a, b, n) + " m=" + std::to_string(m) + " c=" + to_expression(c);
    return lhs == rhs;
  });
}

PropertyResult skew_symmetry(const BRSTContext& ctx, int cases, uint64_t seed) {
  const VertexContext& v = ctx.vctx;
  return run_property("skew-symmetry", ctx, cases, seed, [&](StateGen& g, std::string* what) {
    FockState a = g.homogeneous(), b = g.homogeneous();
    long n = g.mode(-2, 2);
    FockState lhs = nth_product(v, a, b, n);
    FockState rhs;
    long top = max_product_index(v, b, a);
    for (long j = 0; n + j <= top; ++j) {
      FockState t = divided_translation(nth_product(v, b, a, n + j), static_cast<int>(j));
      rhs += HPoly(Rational(j % 2 ? -1 : 1)) * t;
    }
    bool odd = ((parity(a) & parity(b)) + n + 1) % 2 != 0;
    if (odd) rhs = -rhs;
    *what = describe(a, b, n);
    return lhs == rhs;
  });
}

PropertyResult grading_preservation(const BRSTContext& ctx, int cases, uint64_t seed) {
  const VertexContext& v = ctx.vctx;
  return run_property("grading preservation", ctx, cases, seed, [&](StateGen& g, std::string* what) {
    FockState a = g.homogeneous(), b = g.homogeneous();
    long n = g.mode(-3, 3);
    FockState p = nth_product(v, a, b, n);
    *what = describe(a, b, n);
    if (p.is_zero()) return true;
    Gradings ga = gradings(a), gb = gradings(b), gp = gradings(p);
    return gp.homogeneous && gp.conf2 == ga.conf2 + gb.conf2 - 2 * n - 2 && gp.s2 == ga.s2 + gb.s2 &&
           gp.ghost == ga.ghost + gb.ghost;
  });
}

PropertyResult translation_derivation(const BRSTContext& ctx, int cases, uint64_t seed) {
  const VertexContext& v = ctx.vctx;
  return run_property("translation derivation", ctx, cases, seed, [&](StateGen& g, std::string* what) {
    FockState a = g.mixed(), b = g.mixed();
    long n = g.mode(-2, 2);
    FockState lhs = translation(nth_product(v, a, b, n));
    FockState rhs = nth_product(v, translation(a), b, n) + nth_product(v, a, translation(b), n);
    FockState shifted = HPoly(Rational(-n)) * nth_product(v, a, b, n - 1);
    *what = describe(a, b, n);
    return lhs == rhs && nth_product(v, translation(a), b, n) == shifted;
  });
}

PropertyResult mod_hbar_commutativity(const BRSTContext& ctx, int cases, uint64_t seed) {
  const VertexContext& v = ctx.vctx;
  return run_property("mod-hbar commutativity", ctx, cases, seed, [&](StateGen& g, std::string* what) {
    FockState a = g.mixed(), b = g.mixed();
    long n = g.mode(0, 3);
    *what = describe(a, b, n);
    return nth_product(v, a, b, n).mod_hbar().is_zero();
  });
}

PropertyResult locality_bound(const BRSTContext& ctx, int cases, uint64_t seed) {
  const VertexContext& v = ctx.vctx;
  return run_property("locality bound", ctx, cases, seed, [&](StateGen& g, std::string* what) {
    FockState a = g.homogeneous(), b = g.homogeneous();
    *what = describe(a, b, 0);
    int bound = (gradings(a).conf2 + gradings(b).conf2) / 2;
    return static_cast<int>(ope(v, a, b).size()) <= bound;
  });
}

PropertyResult parser_round_trip(const BRSTContext& ctx, int cases, uint64_t seed) {
  return run_property("parser round trip", ctx, cases, seed, [&](StateGen& g, std::string* what) {
    FockState s = g.mixed();
    std::string text = to_expression(s);
    *what = text;
    FockState back = parse_element(text, ctx.vctx);
    return back == s && to_expression(back) == text;
  });
}

PropertyResult weyl_associativity(const BRSTContext& ctx, int cases, uint64_t seed) {
  return run_property("weyl associativity", ctx, cases, seed, [&](StateGen& g, std::string* what) {
    WeylElement a = g.weyl(3), b = g.weyl(3), c = g.weyl(3);
    *what = a.str() + " | " + b.str() + " | " + c.str();
    return weyl_mul(weyl_mul(a, b), c) == weyl_mul(a, weyl_mul(b, c));
  });
}

PropertyResult differential_leibniz(const BRSTContext& ctx, int cases, uint64_t seed) {
  const VertexContext& v = ctx.vctx;
  return run_property("differential leibniz", ctx, cases, seed, [&](StateGen& g, std::string* what) {
    FockState a = g.homogeneous(), b = g.homogeneous();
    long n = g.mode(-2, 2);
    FockState lhs = differential(ctx, nth_product(v, a, b, n));
    FockState rhs = nth_product(v, differential(ctx, a), b, n);
    FockState second = nth_product(v, a, differential(ctx, b), n);
    rhs += parity(a) ? -second : second;
    *what = describe(a, b, n);
    return lhs == rhs;
  });
}

PropertyResult differential_translation(const BRSTContext& ctx, int cases, uint64_t seed) {
  return run_property("differential commutes with translation", ctx, cases, seed, [&](StateGen& g, std::string* what) {
    FockState a = g.mixed();
    *what = to_expression(a);
    return differential(ctx, translation(a)) == translation(differential(ctx, a));
  });
}

std::vector<PropertyResult> engine_suites(const BRSTContext& ctx, int cases, uint64_t seed) {
  return {borcherds_commutator(ctx, cases, seed), skew_symmetry(ctx, cases, seed + 1),
          grading_preservation(ctx, cases, seed + 2), translation_derivation(ctx, cases, seed + 3),
          mod_hbar_commutativity(ctx, cases, seed + 4)};
}

json load_golden() {
  std::ifstream f(HTVA_GOLDEN_PATH);
  if (!f) throw std::runtime_error("cannot open " HTVA_GOLDEN_PATH);
  return json::parse(f);
}

const json& golden_example(const json& golden, const std::string& name) {
  for (const auto& e : golden.at("examples"))
    if (e.at("name") == name) return e;
  throw std::runtime_error("no golden example " + name);
}

namespace {

IntVec primitive(IntVec v) {
  long g = 0;
  for (long x : v) g = std::gcd(g, std::labs(x));
  if (g > 1)
    for (auto& x : v) x /= g;
  auto nz = std::find_if(v.begin(), v.end(), [](long x) { return x != 0; });
  if (nz != v.end() && *nz < 0)
    for (auto& x : v) x = -x;
  return v;
}

// Is every row of b an integer combination of the rows of a?
bool integrally_spanned(const IntMat& a, const IntMat& b) {
  if (a.empty()) return b.empty();
  size_t n = a[0].size();
  RatMat cols(n, RatVec(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < n; ++k) cols[k][i] = a[i][k];
  for (const auto& v : b) {
    RatVec rhs(v.begin(), v.end());
    auto x = solve(cols, rhs);
    if (!x) return false;
    for (const auto& q : *x)
      if (q.get_den() != 1) return false;
  }
  return true;
}

std::vector<int> one_based(const std::vector<int>& v) {
  std::vector<int> out;
  for (int x : v) out.push_back(x + 1);
  return out;
}

}  // namespace

std::vector<std::string> compare_combinatorics(const HypertoricInput& in, const json& ex) {
  std::vector<std::string> bad;
  const json& c = ex.at("combinatorics");
  if (gram_matrix(in) != c.at("gram").get<IntMat>()) bad.push_back("gram matrix");

  auto walls = git_walls(in);
  if (static_cast<long>(walls.size()) != c.at("walls").get<long>()) bad.push_back("wall count");
  std::set<IntVec> normals, expected_normals;
  for (const auto& w : walls) normals.insert(primitive(w.normal));
  for (const auto& n : c.at("wall_normals")) expected_normals.insert(n.get<IntVec>());
  if (normals != expected_normals) bad.push_back("wall normals");

  auto charts = enumerate_charts(in);
  if (static_cast<long>(charts.size()) != c.at("charts").get<long>()) bad.push_back("chart count");
  std::map<std::vector<int>, json> want;
  for (const auto& e : c.at("chart_list")) want[e.at("J").get<std::vector<int>>()] = e;
  for (const auto& ch : charts) {
    auto J = one_based(ch.J);
    auto it = want.find(J);
    if (it == want.end()) {
      bad.push_back("unexpected chart");
      continue;
    }
    std::vector<std::string> alpha;
    for (const auto& q : ch.alpha) alpha.push_back(to_string(q));
    if (alpha != it->second.at("alpha").get<std::vector<std::string>>()) bad.push_back("chart alpha");
    if (one_based(ch.J1) != it->second.at("J1").get<std::vector<int>>()) bad.push_back("chart J1");
    if (one_based(ch.J2) != it->second.at("J2").get<std::vector<int>>()) bad.push_back("chart J2");
  }

  IntMat lib = lattice_lambda0(in);
  IntMat ora = c.at("lambda0").get<IntMat>();
  if (lib.size() != ora.size() || !integrally_spanned(lib, ora) || !integrally_spanned(ora, lib))
    bad.push_back("lambda0 lattice");

  const json& betas = c.at("beta");
  for (int k = 0; k < in.N; ++k) {
    std::vector<std::string> b;
    for (const auto& q : euler_beta(in, k)) b.push_back(to_string(q));
    if (b != betas.at(k).get<std::vector<std::string>>()) bad.push_back("beta " + std::to_string(k + 1));
  }

  if (static_cast<long>(weyl_group(in).size()) != c.at("weyl_order").get<long>()) bad.push_back("weyl order");
  return bad;
}

std::vector<std::string> compare_h0(const BRSTContext& ctx, const json& ex) {
  std::vector<std::string> bad;
  for (const auto& e : ex.at("h0")) {
    int w2 = e.at("w2"), m2 = e.at("m2"), dim = e.at("dim");
    int got = cohomology(ctx, w2, m2, 0).dim_H;
    if (got != dim)
      bad.push_back("H0 at (w2=" + std::to_string(w2) + ", m2=" + std::to_string(m2) + "): " + std::to_string(got) +
                    " != " + std::to_string(dim));
  }
  return bad;
}

}  // namespace htva::testkit
