#include <htva/parallel.hpp>
#include <htva/zhu.hpp>

#include <functional>
#include <random>
#include <sstream>

namespace htva {

int zhu_degree2(const FockState& a) {
  int w = -1;
  for (const auto& [m, c] : a.terms) {
    int cw = m.conf2();
    if (w >= 0 && cw != w) throw InputError("state is not homogeneous in the conformal weight");
    w = cw;
  }
  return w < 0 ? 0 : w;
}

FockState zhu_star(const VertexContext& vctx, const FockState& a, const FockState& b, int m) {
  Rational deg = ratio(zhu_degree2(a), 2);
  long nmax = max_product_index(vctx, a, b);
  FockState out;
  for (long j = 0; -m + j <= nmax; ++j) {
    Rational coeff = binomial(deg, j);
    if (coeff == 0) continue;
    out += HPoly(coeff) * nth_product(vctx, a, b, -m + j);
  }
  return out.specialize();
}

FockState zhu_mul(const VertexContext& vctx, const FockState& a, const FockState& b) { return zhu_star(vctx, a, b, 1); }

FockState zhu_circ(const VertexContext& vctx, const FockState& a, const FockState& b) { return zhu_star(vctx, a, b, 2); }

FockState zhu_bracket(const VertexContext& vctx, const FockState& a, const FockState& b) {
  Rational deg = ratio(zhu_degree2(a), 2) - 1;
  long nmax = max_product_index(vctx, a, b);
  FockState out;
  for (long j = 0; j <= nmax; ++j) {
    Rational coeff = binomial(deg, j);
    if (coeff == 0) continue;
    out += HPoly(coeff) * nth_product(vctx, a, b, j);
  }
  return out.specialize();
}

int RelationSpan::index(const Monomial& m) {
  auto it = index_.find(m);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(monomials_.size());
  index_.emplace(m, id);
  monomials_.push_back(m);
  return id;
}

std::map<int, Rational> RelationSpan::coords(const FockState& s, bool grow) {
  std::map<int, Rational> v;
  for (const auto& [m, c] : s.specialize().terms) {
    int id;
    if (grow) {
      id = index(m);
    } else {
      auto it = index_.find(m);
      id = it == index_.end() ? -1 : it->second;
    }
    v[id] += c.at_one();
  }
  return v;
}

std::map<int, Rational> RelationSpan::reduce(std::map<int, Rational> v) const {
  std::vector<std::pair<int, Rational>> hits;
  for (const auto& [i, c] : v)
    if (rows_.count(i)) hits.emplace_back(i, c);
  for (const auto& [p, c] : hits) {
    for (const auto& [j, r] : rows_.at(p)) {
      Rational& x = v[j];
      x -= c * r;
    }
  }
  for (auto it = v.begin(); it != v.end();) it = it->second == 0 ? v.erase(it) : std::next(it);
  return v;
}

bool RelationSpan::insert(const FockState& s) {
  auto v = reduce(coords(s, true));
  if (v.empty()) return false;
  int p = v.begin()->first;
  Rational inv = 1 / v.begin()->second;
  for (auto& [j, c] : v) c *= inv;
  for (auto& [q, row] : rows_) {
    auto it = row.find(p);
    if (it == row.end()) continue;
    Rational f = it->second;
    for (const auto& [j, c] : v) {
      Rational& x = row[j];
      x -= f * c;
    }
    for (auto jt = row.begin(); jt != row.end();) jt = jt->second == 0 ? row.erase(jt) : std::next(jt);
  }
  rows_.emplace(p, std::move(v));
  return true;
}

bool RelationSpan::contains(const FockState& s) const {
  auto v = const_cast<RelationSpan*>(this)->coords(s, false);
  if (v.count(-1) && v.at(-1) != 0) return false;
  v.erase(-1);
  return reduce(v).empty();
}

FockState RelationSpan::normal_form(const FockState& s) const {
  FockState spec = s.specialize();
  std::map<int, Rational> known;
  FockState out;
  for (const auto& [m, c] : spec.terms) {
    auto it = index_.find(m);
    if (it == index_.end())
      out.add(m, c);
    else
      known[it->second] += c.at_one();
  }
  for (const auto& [i, c] : reduce(known)) out.add(monomials_[i], HPoly(c));
  return out;
}

ZhuSetup zhu_setup(const BRSTContext& ctx, int W2) {
  ZhuSetup s;
  s.ctx = &ctx;
  s.W2 = W2;
  std::vector<std::vector<FockState>> h0(W2 + 1), bd(W2 + 1);
  parallel_for(static_cast<size_t>(W2 + 1), [&](size_t w) {
    int w2 = static_cast<int>(w);
    h0[w] = level_cohomology(ctx, w2);
    LevelPiece prev = level_piece(ctx, w2, -1);
    auto basis0 = enumerate_monomials(ctx, w2, 0);
    for (const auto& col : prev.d_matrix.columns) {
      FockState st;
      for (const auto& [i, c] : col) st.add(basis0[i], HPoly(c));
      if (!st.is_zero()) bd[w].push_back(st);
    }
  });
  for (int w2 = 0; w2 <= W2; ++w2) {
    s.h0[w2] = h0[w2];
    s.boundaries[w2] = bd[w2];
  }
  return s;
}

RelationSpan zhu_relations(const ZhuSetup& setup) {
  RelationSpan span;
  const VertexContext& v = setup.ctx->vctx;
  for (const auto& [w2, list] : setup.boundaries)
    for (const auto& b : list) span.insert(b);
  for (const auto& [wu, us] : setup.h0)
    for (const auto& [wv, vs] : setup.h0) {
      if (wu + wv + 2 > setup.W2) continue;
      for (const auto& u : us)
        for (const auto& w : vs) span.insert(zhu_circ(v, u, w));
    }
  return span;
}

RelationSpan c2_relations(const ZhuSetup& setup, int w2) {
  RelationSpan span;
  const VertexContext& v = setup.ctx->vctx;
  auto bit = setup.boundaries.find(w2);
  if (bit != setup.boundaries.end())
    for (const auto& b : bit->second) span.insert(b);
  for (const auto& [wu, us] : setup.h0)
    for (const auto& [wv, vs] : setup.h0) {
      if (wu + wv + 2 != w2) continue;
      for (const auto& u : us)
        for (const auto& w : vs) span.insert(nth_product(v, u, w, -2).specialize());
    }
  return span;
}

FockState c2_reduce(const ZhuSetup& setup, const FockState& a) {
  int w2 = zhu_degree2(a);
  if (w2 > setup.W2) throw InputError("state weight exceeds the truncation weight");
  return c2_relations(setup, w2).normal_form(a);
}

RatVec rho_shift(const HypertoricInput& in) {
  RatVec rho(in.M, Rational(0));
  for (int i = 0; i < in.M; ++i)
    for (int k = 0; k < in.N; ++k) rho[i] += ratio(in.delta[i][k], 2);
  return rho;
}

WeylElement free_field_zhu(const BRSTContext& ctx, const FockState& a) {
  int N = ctx.input.N, M = ctx.input.M;
  std::map<Monomial, WeylElement> memo;
  std::function<WeylElement(const FockState&)> phi_state;
  std::function<WeylElement(const Monomial&)> phi = [&](const Monomial& m) -> WeylElement {
    if (m.empty()) return WeylElement::scalar(N, M, Rational(1));
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    ModeKey key = m.f[0].key;
    Kind kind = key_kind(key);
    int site = key_site(key), depth = key_depth(key);
    if (kind == Kind::Psi || kind == Kind::PsiStar) throw DomainError("free-field Zhu map needs ghost-free states");
    if (m.f[0].exp < 0) throw DomainError("free-field Zhu map needs polynomial states");
    Monomial rest;
    remove_factor(m, 0, &rest);
    Generator g{kind, site};
    Rational deg = ratio(conf2(kind), 2);
    FockState w = FockState::of(rest);
    WeylElement out(N, M);
    if (depth == 1) {
      WeylElement gi = kind == Kind::X ? WeylElement::x(N, M, site)
                       : kind == Kind::Y ? WeylElement::d(N, M, site)
                                         : WeylElement::c(N, M, site);
      out = weyl_mul(gi, phi(rest));
    }
    // g_(-d) w = -sum_{j>=1} binom(Deg_g, j) g_(-d+j) w modulo O(V), plus g * w when d = 1
    long top = depth + rest.max_depth();
    for (long j = 1; -depth + j <= top; ++j) {
      Rational coeff = binomial(deg, j);
      if (coeff == 0) continue;
      FockState t = apply_mode(ctx.vctx, g, -depth + j, w).specialize();
      if (t.is_zero()) continue;
      out -= phi_state(t).scaled(coeff);
    }
    memo.emplace(m, out);
    return out;
  };
  phi_state = [&](const FockState& s) {
    WeylElement r(N, M);
    for (const auto& [m, c] : s.terms) r += phi(m).scaled(c.at_one());
    return r;
  };
  return phi_state(a.specialize());
}

ReducedElement to_reduced(const BRSTContext& ctx, const FockState& a) {
  return reduce_mod_ideal(ctx.input, shift_c(free_field_zhu(ctx, a), rho_shift(ctx.input)));
}

FockState symbol(const FockState& a) {
  FockState out;
  for (const auto& [m, c] : a.specialize().terms)
    if (m.max_depth() <= 1) out.add(m, c);
  return out;
}

namespace {

int bracket_value(ModeKey a, ModeKey b) {
  if (key_site(a) != key_site(b)) return 0;
  Kind ka = key_kind(a), kb = key_kind(b);
  if (ka == Kind::X && kb == Kind::Y) return -1;
  if (ka == Kind::Y && kb == Kind::X) return 1;
  if ((ka == Kind::Psi && kb == Kind::PsiStar) || (ka == Kind::PsiStar && kb == Kind::Psi)) return 1;
  return 0;
}

}  // namespace

FockState symbol_bracket(const FockState& a, const FockState& b) {
  FockState out;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms)
      for (size_t p = 0; p < ma.f.size(); ++p)
        for (size_t q = 0; q < mb.f.size(); ++q) {
          int val = bracket_value(ma.f[p].key, mb.f[q].key);
          if (val == 0) continue;
          Monomial ra, rb;
          remove_factor(ma, p, &ra);
          int sign_b = remove_factor(mb, q, &rb);
          int sign_a = 1;
          if (key_odd(ma.f[p].key)) {
            int after = ma.odd_count() - ma.odd_before(p) - 1;
            if (after % 2) sign_a = -1;
          }
          Rational coeff = Rational(val * sign_a * sign_b * ma.f[p].exp * mb.f[q].exp);
          out += (HPoly(coeff) * ca * cb) * normal_product(FockState::of(ra), FockState::of(rb));
        }
  return out.specialize();
}

MPoly reduced_symbol(const HypertoricInput& in, const FockState& a) {
  int N = in.N, nv = 2 * N;
  MPoly out(nv);
  for (const auto& [m, c] : symbol(a).terms) {
    if (m.ghost() != 0 || m.odd_count() != 0) continue;
    MPoly t = MPoly::constant(nv, c.at_one());
    for (const auto& f : m.f) {
      Kind k = key_kind(f.key);
      int s = key_site(f.key);
      MPoly base(nv);
      if (k == Kind::X) base = MPoly::variable(nv, s);
      if (k == Kind::Y) base = MPoly::variable(nv, N + s);
      if (k == Kind::C)
        for (int j = 0; j < N; ++j)
          if (in.delta[s][j])
            base += (MPoly::variable(nv, j) * MPoly::variable(nv, N + j)).scaled(Rational(in.delta[s][j]));
      t = t * base.pow(f.exp);
    }
    out += t;
  }
  return out;
}

namespace {

MPoly derivative(const MPoly& f, int var) {
  MPoly r(f.nvars);
  for (const auto& [e, c] : f.terms) {
    if (e[var] == 0) continue;
    std::vector<int> d(e);
    d[var] -= 1;
    r.add(d, c * e[var]);
  }
  return r;
}

}  // namespace

MPoly classical_bracket(int N, const MPoly& f, const MPoly& g) {
  MPoly r(f.nvars);
  for (int k = 0; k < N; ++k) {
    r -= derivative(f, k) * derivative(g, N + k);
    r += derivative(f, N + k) * derivative(g, k);
  }
  return r;
}

PoissonReport c2_poisson_check(const ZhuSetup& setup, int pairs, uint64_t seed) {
  PoissonReport rep;
  const BRSTContext& ctx = *setup.ctx;
  std::vector<int> weights;
  for (const auto& [w2, reps] : setup.h0)
    if (w2 > 0 && !reps.empty()) weights.push_back(w2);
  std::mt19937_64 rng(seed);
  auto sample = [&](int* w2) {
    *w2 = weights[rng() % weights.size()];
    const auto& reps = setup.h0.at(*w2);
    FockState s;
    while (s.is_zero())
      for (const auto& r : reps) {
        long c = static_cast<long>(rng() % 5) - 2;
        if (c) s += HPoly(c) * r;
      }
    return s;
  };
  if (!weights.empty())
    for (int p = 0; p < pairs; ++p) {
      int wu, wv;
      FockState u = sample(&wu), v = sample(&wv);
      ++rep.pairs;
      FockState uv = nth_product(ctx.vctx, u, v, 0).specialize();
      FockState lhs = symbol(uv), rhs = symbol_bracket(symbol(u), symbol(v));
      if (lhs != rhs) {
        ++rep.symbol_failures;
        rep.mismatches.push_back("symbol: " + lhs.str() + " vs " + rhs.str());
      }
      MPoly rl = reduced_symbol(ctx.input, uv);
      MPoly rr = classical_bracket(ctx.input.N, reduced_symbol(ctx.input, u), reduced_symbol(ctx.input, v));
      if (!(rl == rr)) {
        ++rep.reduced_failures;
        rep.mismatches.push_back("reduced symbol mismatch at weights " + std::to_string(wu) + "/2, " +
                                 std::to_string(wv) + "/2");
      }
    }
  for (const auto& [w2, reps] : setup.h0) {
    if (w2 + 2 > setup.W2) continue;
    for (const auto& a : reps) {
      ++rep.derivative_checks;
      if (!c2_reduce(setup, translation(a)).is_zero()) {
        ++rep.derivative_failures;
        rep.mismatches.push_back("derivative survives: " + a.str());
      }
    }
  }
  return rep;
}

std::vector<NamedGenerator> zhu_generators(const BRSTContext& ctx) {
  std::vector<NamedGenerator> out;
  const auto& in = ctx.input;
  for (int k = 0; k < in.N; ++k) out.push_back({"H" + std::to_string(k + 1), h_tilde(ctx, k), h_k(in, k)});
  for (const auto& z : lattice_lambda0(in)) {
    for (int s : {1, -1}) {
      IntVec v(z.size());
      for (size_t k = 0; k < z.size(); ++k) v[k] = s * z[k];
      std::ostringstream os;
      os << "P(";
      for (size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
      os << ")";
      out.push_back({os.str(), p_tilde(ctx, v), p_zeta(in, v)});
    }
  }
  return out;
}

bool ZhuCompareReport::commutators_ok() const {
  if (commutators.empty()) return false;
  for (const auto& c : commutators) {
    if (!c.formula_matches) return false;
    if (c.literal_checked && !c.literal_matches) return false;
    if (c.eigen_checked && !c.eigen_matches) return false;
  }
  return true;
}

namespace {

IntVec zeta_of(const FockState& p, int N) {
  IntVec z(N, 0);
  const Monomial& m = p.terms.begin()->first;
  for (const auto& f : m.f) {
    int s = key_site(f.key);
    z[s] += key_kind(f.key) == Kind::X ? f.exp : -f.exp;
  }
  return z;
}

}  // namespace

ZhuCompareReport compare_zhu_weyl(const BRSTContext& ctx, int W2) {
  ZhuCompareReport rep;
  const auto& in = ctx.input;
  const VertexContext& v = ctx.vctx;
  ZhuSetup setup = zhu_setup(ctx, W2);
  RelationSpan rel = zhu_relations(setup);
  auto gens = zhu_generators(ctx);

  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = i + 1; j < gens.size(); ++j) pairs.emplace_back(i, j);
  rep.commutators.resize(pairs.size());
  parallel_for(pairs.size(), [&](size_t t) {
    const auto& a = gens[pairs[t].first];
    const auto& b = gens[pairs[t].second];
    CommutatorCheck c;
    c.a = a.name;
    c.b = b.name;
    FockState r = zhu_bracket(v, a.va, b.va);
    ReducedElement va = to_reduced(ctx, r);
    ReducedElement weyl = reduce_mod_ideal(in, weyl_commutator(a.weyl, b.weyl));
    c.formula_matches = va == weyl;
    c.va = va.str();
    c.weyl = weyl.str();
    if (zhu_degree2(a.va) + zhu_degree2(b.va) <= W2) {
      c.literal_checked = true;
      c.literal_matches = rel.contains(zhu_mul(v, a.va, b.va) - zhu_mul(v, b.va, a.va) - r);
    }
    if (a.name[0] == 'H' && b.name[0] == 'P') {
      int j = std::stoi(a.name.substr(1)) - 1;
      IntVec z = zeta_of(b.va, in.N);
      FockState expected = HPoly(Rational(z[j])) * b.va;
      c.eigen_checked = true;
      c.eigen_matches = rel.contains(r - expected) && to_reduced(ctx, expected) == va;
    }
    rep.commutators[t] = c;
  });
  for (const auto& c : rep.commutators) {
    if (!c.formula_matches) rep.mismatches.push_back("[" + c.a + "," + c.b + "]: " + c.va + " vs " + c.weyl);
    if (c.literal_checked && !c.literal_matches) rep.mismatches.push_back("[" + c.a + "," + c.b + "] literal");
    if (c.eigen_checked && !c.eigen_matches) rep.mismatches.push_back("[" + c.a + "," + c.b + "] eigenvalue");
  }

  // Generated subalgebra of the C2 quotient.
  std::vector<std::pair<FockState, int>> cgens;
  for (int k = 0; k < in.N; ++k) cgens.push_back({h_tilde(ctx, k), 2});
  for (const auto& z : lambda0_window(in, W2)) {
    int deg = 0;
    for (long x : z) deg += static_cast<int>(std::abs(x));
    if (deg <= W2) cgens.push_back({p_tilde(ctx, z), deg});
  }
  for (int w2 = 0; w2 <= W2; ++w2) {
    RelationSpan span = c2_relations(setup, w2);
    int base = span.rank();
    std::function<void(size_t, int, FockState)> rec = [&](size_t g, int rem, FockState acc) {
      if (rem == 0) {
        span.insert(acc);
        return;
      }
      if (g == cgens.size()) return;
      rec(g + 1, rem, acc);
      FockState cur = acc;
      for (int used = cgens[g].second; used <= rem; used += cgens[g].second) {
        cur = nth_product(v, cgens[g].first, cur, -1).specialize();
        rec(g + 1, rem - used, cur);
      }
    };
    rec(0, w2, FockState::vacuum());
    rep.c2_dims[w2] = span.rank() - base;
  }
  InvariantsReport inv = weyl_invariants_check(in, W2);
  rep.classical_dims = inv.generated_dims;
  rep.invariant_dims = inv.invariant_dims;
  for (const auto& [w2, d] : rep.c2_dims)
    if (rep.classical_dims[w2] != d)
      rep.mismatches.push_back("weight " + std::to_string(w2) + "/2: C2 quotient " + std::to_string(d) +
                               ", classical " + std::to_string(rep.classical_dims[w2]));
  return rep;
}

}  // namespace htva
