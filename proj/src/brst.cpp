#include <htva/brst.hpp>
#include <htva/parallel.hpp>

#include <cstdint>
#include <functional>
#include <sstream>

namespace htva {

bool DifferentialCache::lookup(const Monomial& m, FockState* out) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = memo_.find(m);
  if (it == memo_.end()) return false;
  *out = it->second;
  return true;
}

void DifferentialCache::store(const Monomial& m, const FockState& d) {
  std::lock_guard<std::mutex> lock(mutex_);
  memo_.emplace(m, d);
}

BRSTContext BRSTContext::make(const HypertoricInput& in, std::optional<IntMat> gram_override) {
  BRSTContext ctx;
  ctx.input = in;
  ctx.vctx.N = in.N;
  ctx.vctx.M = in.M;
  ctx.vctx.gram = gram_override ? *gram_override : gram_matrix(in);
  if (static_cast<int>(ctx.vctx.gram.size()) != in.M) throw InputError("Gram override has wrong size");
  for (const auto& row : ctx.vctx.gram)
    if (static_cast<int>(row.size()) != in.M) throw InputError("Gram override has wrong size");
  for (int i = 0; i < in.M; ++i) {
    ctx.comoments.push_back(chiral_comoment(ctx, i));
    ctx.Q += normal_product(ctx.comoments.back(), FockState::mode(Kind::PsiStar, i, 1));
  }
  return ctx;
}

FockState chiral_comoment(const BRSTContext& ctx, int i) {
  if (i < 0 || i >= ctx.input.M) throw InputError("comoment index out of range");
  FockState mu;
  for (int j = 0; j < ctx.input.N; ++j) {
    long d = ctx.input.delta[i][j];
    if (d == 0) continue;
    Monomial m;
    m.f = {{make_key(Kind::X, j, 1), 1}, {make_key(Kind::Y, j, 1), 1}};
    mu.add(m, HPoly(Rational(d)));
  }
  mu -= FockState::mode(Kind::C, i, 1);
  return mu;
}

namespace {

FockState plus_part(const BRSTContext& ctx, const FockState& a) {
  FockState out;
  for (int i = 0; i < ctx.input.M; ++i) {
    long nmax = max_product_index(ctx.vctx, ctx.comoments[i], a);
    for (long n = 0; n <= nmax; ++n) {
      FockState t = field_mode(ctx.vctx, ctx.comoments[i], n, a);
      if (t.is_zero()) continue;
      out += apply_mode(ctx.vctx, {Kind::PsiStar, i}, -n - 1, t);
    }
  }
  return hbar_divide(out, 1);
}

FockState minus_part(const BRSTContext& ctx, const FockState& a) {
  FockState out;
  int depth = a.max_depth();
  for (int i = 0; i < ctx.input.M; ++i)
    for (long n = 0; n < depth; ++n) {
      FockState t = apply_mode(ctx.vctx, {Kind::PsiStar, i}, n, a);
      if (t.is_zero()) continue;
      out += field_mode(ctx.vctx, ctx.comoments[i], -n - 1, t);
    }
  return hbar_divide(out, 1);
}

FockState differential_of_monomial(const BRSTContext& ctx, const Monomial& m) {
  FockState cached;
  if (ctx.cache && ctx.cache->lookup(m, &cached)) return cached;
  FockState s = FockState::of(m);
  FockState d = plus_part(ctx, s) + minus_part(ctx, s);
  if (ctx.cache) ctx.cache->store(m, d);
  return d;
}

}  // namespace

FockState differential(const BRSTContext& ctx, const FockState& a) {
  FockState out;
  for (const auto& [m, c] : a.terms) out += c * differential_of_monomial(ctx, m);
  return out;
}

std::pair<FockState, FockState> differential_split(const BRSTContext& ctx, const FockState& a) {
  return {plus_part(ctx, a), minus_part(ctx, a)};
}

FockState differential_from_charge(const BRSTContext& ctx, const FockState& a) {
  return hbar_divide(nth_product(ctx.vctx, ctx.Q, a, 0), 1);
}

namespace {

// mod-hbar part of hbar^{-1} (mu_i)_(n) on an hbar-free monomial, n >= 0.
FockState classical_plus_operator(const BRSTContext& ctx, int i, int n, const Monomial& m) {
  FockState out;
  for (size_t pos = 0; pos < m.f.size(); ++pos) {
    ModeKey key = m.f[pos].key;
    Kind k = key_kind(key);
    if (k != Kind::X && k != Kind::Y) continue;
    int j = key_site(key);
    long d = ctx.input.delta[i][j];
    int depth = key_depth(key) - n;
    if (d == 0 || depth < 1) continue;
    Monomial rest;
    remove_factor(m, pos, &rest);  // even factor, sign +1
    Monomial single, prod;
    single.f.push_back({make_key(k, j, depth), 1});
    monomial_product(single, rest, &prod);
    Rational coeff = Rational(d * m.f[pos].exp);
    if (k == Kind::Y) coeff = -coeff;
    out.add(prod, HPoly(coeff));
  }
  return out;
}

}  // namespace

FockState classical_differential(const BRSTContext& ctx, const FockState& a) {
  FockState out;
  for (const auto& [m, c] : a.terms) {
    if (c.degree() > 0 || c.low_degree() != 0) throw DomainError("classical differential needs hbar-free input");
    Rational coeff = c[0];
    FockState term;
    // minus part: each psi_i(-n-1) contracts to the divided derivative of the comoment
    for (size_t pos = 0; pos < m.f.size(); ++pos) {
      ModeKey key = m.f[pos].key;
      if (key_kind(key) != Kind::Psi) continue;
      Monomial rest;
      int sign = remove_factor(m, pos, &rest);
      FockState mu = divided_translation(ctx.comoments[key_site(key)], key_depth(key) - 1);
      term += HPoly(Rational(sign)) * normal_product(mu, FockState::of(rest));
    }
    // plus part
    int depth = m.max_depth();
    for (int i = 0; i < ctx.input.M; ++i)
      for (int n = 0; n < depth; ++n) {
        FockState t = classical_plus_operator(ctx, i, n, m);
        if (t.is_zero()) continue;
        term += normal_product(FockState::mode(Kind::PsiStar, i, n + 1), t);
      }
    out += HPoly(coeff) * term;
  }
  return out;
}

FockState GradedPiece::element(size_t i) const {
  return FockState::of(basis[i], HPoly::monomial(Rational(1), hbar_power[i]));
}

FockState GradedPiece::vector_to_state(const SparseVec& v) const {
  FockState s;
  for (const auto& [i, c] : v) s.add(basis[i], HPoly::monomial(c, hbar_power[i]));
  return s;
}

std::vector<Monomial> enumerate_monomials(const BRSTContext& ctx, int w2, int g) {
  struct Slot {
    ModeKey key;
    int weight;
    bool odd;
  };
  std::vector<Slot> slots;
  auto add_slots = [&](Kind k, int sites) {
    for (int s = 0; s < sites; ++s)
      for (int d = 1;; ++d) {
        int w = conf2(k) + 2 * (d - 1);
        if (w > w2) break;
        slots.push_back({make_key(k, s, d), w, is_odd(k)});
      }
  };
  add_slots(Kind::X, ctx.input.N);
  add_slots(Kind::Y, ctx.input.N);
  add_slots(Kind::C, ctx.input.M);
  add_slots(Kind::PsiStar, ctx.input.M);
  add_slots(Kind::Psi, ctx.input.M);
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) { return a.key < b.key; });

  std::vector<Monomial> out;
  Monomial cur;
  std::function<void(size_t, int)> rec = [&](size_t idx, int remaining) {
    if (idx == slots.size()) {
      if (remaining == 0 && cur.ghost() == g) out.push_back(cur);
      return;
    }
    rec(idx + 1, remaining);
    const Slot& s = slots[idx];
    int max_exp = s.odd ? 1 : (s.weight == 0 ? 0 : remaining / s.weight);
    if (s.odd && s.weight > remaining) max_exp = 0;
    for (int e = 1; e <= max_exp; ++e) {
      cur.f.push_back({s.key, e});
      rec(idx + 1, remaining - e * s.weight);
      cur.f.pop_back();
    }
  };
  rec(0, w2);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

SparseMatrix assemble(const BRSTContext& ctx, const std::vector<Monomial>& basis, const std::vector<int>& powers,
                      const std::vector<Monomial>& target, const std::vector<int>& target_powers, bool specialize) {
  std::map<Monomial, int> index;
  for (size_t i = 0; i < target.size(); ++i) index.emplace(target[i], static_cast<int>(i));
  SparseMatrix mat;
  mat.rows = static_cast<int>(target.size());
  mat.cols = static_cast<int>(basis.size());
  mat.columns.resize(basis.size());
  for (size_t c = 0; c < basis.size(); ++c) {
    FockState d = differential_of_monomial(ctx, basis[c]);
    std::map<int, Rational> col;
    for (const auto& [m, poly] : d.terms) {
      auto it = index.find(m);
      if (it == index.end()) throw DomainError("differential left its graded piece");
      if (specialize) {
        col[it->second] += poly.at_one();
        continue;
      }
      int shift = target_powers[it->second] - powers[c];
      if (poly.degree() != shift || poly.low_degree() != shift)
        throw DomainError("differential is not homogeneous in the S-weight");
      col[it->second] += poly[shift];
    }
    mat.columns[c] = sparse_from_map(col);
  }
  return mat;
}

void piece_basis(const BRSTContext& ctx, int w2, int m2, int g, std::vector<Monomial>* basis,
                 std::vector<int>* powers) {
  basis->clear();
  powers->clear();
  if (((m2 - w2) % 2) != 0) return;
  for (auto& m : enumerate_monomials(ctx, w2, g)) {
    int diff = m2 - m.intrinsic_s2();
    if (diff < 0 || diff % 2 != 0) continue;
    basis->push_back(m);
    powers->push_back(diff / 2);
  }
}

struct KerIm {
  int dim_kernel = 0;
  int dim_image_in = 0;
  std::vector<SparseVec> reps;
};

KerIm ker_mod_im(const SparseMatrix& in, const SparseMatrix& out) {
  KerIm r;
  auto ker = kernel(out);
  r.dim_kernel = static_cast<int>(ker.size());
  Echelon image;
  for (const auto& col : in.columns) image.insert(col);
  r.dim_image_in = image.rank();
  for (const auto& v : ker)
    if (image.insert(v)) r.reps.push_back(v);
  return r;
}

}  // namespace

GradedPiece basis_of_piece(const BRSTContext& ctx, int w2, int m2, int g, bool with_matrix) {
  if (w2 < 0 || m2 < 0) throw InputError("weights must be nonnegative");
  GradedPiece p;
  p.w2 = w2;
  p.m2 = m2;
  p.g = g;
  piece_basis(ctx, w2, m2, g, &p.basis, &p.hbar_power);
  if (with_matrix) {
    std::vector<Monomial> tb;
    std::vector<int> tp;
    piece_basis(ctx, w2, m2, g + 1, &tb, &tp);
    p.d_matrix = assemble(ctx, p.basis, p.hbar_power, tb, tp, false);
  }
  return p;
}

CohomologyResult cohomology(const BRSTContext& ctx, int w2, int m2, int g) {
  GradedPiece prev = basis_of_piece(ctx, w2, m2, g - 1);
  GradedPiece cur = basis_of_piece(ctx, w2, m2, g);
  KerIm k = ker_mod_im(prev.d_matrix, cur.d_matrix);
  CohomologyResult r;
  r.dim_kernel = k.dim_kernel;
  r.dim_image_in = k.dim_image_in;
  r.dim_H = static_cast<int>(k.reps.size());
  for (const auto& v : k.reps) r.basis_of_H.push_back(cur.vector_to_state(v));
  return r;
}

LevelPiece level_piece(const BRSTContext& ctx, int w2, int g, bool with_matrix) {
  LevelPiece p;
  p.w2 = w2;
  p.g = g;
  p.basis = enumerate_monomials(ctx, w2, g);
  if (with_matrix) {
    std::vector<int> zeros(p.basis.size(), 0);
    auto target = enumerate_monomials(ctx, w2, g + 1);
    std::vector<int> tz(target.size(), 0);
    p.d_matrix = assemble(ctx, p.basis, zeros, target, tz, true);
  }
  return p;
}

std::vector<FockState> level_cohomology(const BRSTContext& ctx, int w2) {
  LevelPiece prev = level_piece(ctx, w2, -1);
  LevelPiece cur = level_piece(ctx, w2, 0);
  KerIm k = ker_mod_im(prev.d_matrix, cur.d_matrix);
  std::vector<FockState> out;
  for (const auto& v : k.reps) {
    FockState s;
    for (const auto& [i, c] : v) s.add(cur.basis[i], HPoly(c));
    out.push_back(s);
  }
  return out;
}

bool ComplexCheck::negative_ghost_vanishing() const {
  if (negative_ghost_dims.empty()) return false;
  for (const auto& [k, d] : negative_ghost_dims)
    if (d != 0) return false;
  return true;
}

ComplexCheck complex_check(const BRSTContext& ctx, int max_w2, int max_m2, bool with_charge) {
  ComplexCheck r;
  std::vector<Monomial> all;
  for (int w2 = 0; w2 <= max_w2; ++w2) {
    int gmax = ctx.input.M * (w2 / 2 + 1);
    for (int g = -w2 / 2; g <= gmax; ++g) {
      std::map<int, int> per_m2;
      for (auto& m : enumerate_monomials(ctx, w2, g)) {
        int s2 = m.intrinsic_s2();
        if (s2 > max_m2) continue;
        for (int m2 = s2; m2 <= max_m2; m2 += 2) ++per_m2[m2];
        all.push_back(std::move(m));
      }
      r.pieces += static_cast<int>(per_m2.size());
      if (g < 0)
        for (const auto& [m2, n] : per_m2) r.negative_ghost_dims[{w2, m2, g}] = cohomology(ctx, w2, m2, g).dim_H;
    }
  }
  r.monomials = static_cast<long>(all.size());
  enum : uint8_t { kSquare = 1, kCharge = 2, kSplit = 4, kClassical = 8, kClassicalSquare = 16 };
  std::vector<uint8_t> flags(all.size(), 0);
  parallel_for(all.size(), [&](size_t t) {
    FockState s = FockState::of(all[t]);
    uint8_t f = 0;
    FockState d = differential(ctx, s);
    if (!differential(ctx, d).is_zero()) f |= kSquare;
    if (with_charge && differential_from_charge(ctx, s) != d) f |= kCharge;
    auto [dp, dm] = differential_split(ctx, s);
    bool split_ok = dp + dm == d;
    if (split_ok) {
      auto [pp, pm] = differential_split(ctx, dp);
      auto [mp, mm] = differential_split(ctx, dm);
      split_ok = pp.is_zero() && mm.is_zero() && (pm + mp).is_zero();
    }
    if (!split_ok) f |= kSplit;
    FockState cd = classical_differential(ctx, s);
    if (cd != d.mod_hbar()) f |= kClassical;
    if (!classical_differential(ctx, cd).is_zero()) f |= kClassicalSquare;
    flags[t] = f;
  });
  const std::pair<uint8_t, const char*> labels[] = {{kSquare, "d^2 != 0"},
                                                     {kCharge, "d != Q_(0)/hbar"},
                                                     {kSplit, "double complex split"},
                                                     {kClassical, "classical d != d mod hbar"},
                                                     {kClassicalSquare, "classical d^2 != 0"}};
  for (size_t t = 0; t < all.size(); ++t) {
    uint8_t f = flags[t];
    if (!f) continue;
    if (f & kSquare) ++r.d_squared_failures;
    if (f & kCharge) ++r.charge_failures;
    if (f & kSplit) ++r.split_failures;
    if (f & kClassical) ++r.classical_failures;
    if (f & kClassicalSquare) ++r.classical_square_failures;
    for (const auto& [bit, label] : labels)
      if ((f & bit) && r.mismatches.size() < 8) r.mismatches.push_back(std::string(label) + " on " + FockState::of(all[t]).str());
  }
  return r;
}

Monomial chart_T_power(const BRSTContext& ctx, const Chart& chart, const IntVec& v) {
  if (static_cast<int>(v.size()) != ctx.input.M) throw InputError("torus exponent has wrong length");
  Monomial m;
  for (size_t k = 0; k < chart.J.size(); ++k) {
    long e = 0;
    for (int i = 0; i < ctx.input.M; ++i) e += v[i] * chart.t_exponents[i][k];
    if (e == 0) continue;
    Kind kind = chart.in_J1(chart.J[k]) ? Kind::X : Kind::Y;
    m.f.push_back({make_key(kind, chart.J[k], 1), static_cast<int>(e)});
  }
  std::sort(m.f.begin(), m.f.end());
  return m;
}

namespace {

FockState free_site_element(const BRSTContext& ctx, const Chart& chart, int site, Kind kind, int sign) {
  if (std::find(chart.J.begin(), chart.J.end(), site) != chart.J.end())
    throw InputError("site " + std::to_string(site + 1) + " lies in the chart index set");
  IntVec v(ctx.input.M);
  for (int i = 0; i < ctx.input.M; ++i) v[i] = sign * ctx.input.delta[i][site];
  Monomial t = chart_T_power(ctx, chart, v), single, prod;
  single.f.push_back({make_key(kind, site, 1), 1});
  monomial_product(single, t, &prod);
  return FockState::of(prod);
}

}  // namespace

FockState chart_astar(const BRSTContext& ctx, const Chart& chart, int site) {
  return free_site_element(ctx, chart, site, Kind::X, -1);
}

FockState chart_a(const BRSTContext& ctx, const Chart& chart, int site) {
  return free_site_element(ctx, chart, site, Kind::Y, 1);
}

FockState chart_b(const BRSTContext& ctx, const Chart& chart, int i) {
  FockState b = FockState::mode(Kind::C, i, 1);
  for (int l = 0; l < ctx.input.M; ++l) {
    long g = ctx.vctx.gram[i][l];
    if (g == 0) continue;
    IntVec e(ctx.input.M, 0);
    e[l] = 1;
    b += HPoly::monomial(Rational(g), 1) * dlog(chart_T_power(ctx, chart, e));
  }
  return b;
}

FockState p_tilde(const BRSTContext& ctx, const IntVec& zeta) {
  if (static_cast<int>(zeta.size()) != ctx.input.N) throw InputError("lattice vector has wrong length");
  Monomial m;
  for (int k = 0; k < ctx.input.N; ++k)
    if (zeta[k] > 0) m.f.push_back({make_key(Kind::X, k, 1), static_cast<int>(zeta[k])});
  for (int k = 0; k < ctx.input.N; ++k)
    if (zeta[k] < 0) m.f.push_back({make_key(Kind::Y, k, 1), static_cast<int>(-zeta[k])});
  return FockState::of(m);
}

FockState h_tilde(const BRSTContext& ctx, int k) {
  Monomial m;
  m.f = {{make_key(Kind::X, k, 1), 1}, {make_key(Kind::Y, k, 1), 1}};
  FockState h = FockState::of(m);
  RatVec beta = euler_beta(ctx.input, k);
  for (int i = 0; i < ctx.input.M; ++i)
    if (beta[i] != 0) h -= HPoly(beta[i]) * FockState::mode(Kind::C, i, 1);
  return h;
}

namespace {

std::string vec_name(const IntVec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

std::vector<NamedState> generator_candidates(const BRSTContext& ctx, const std::optional<Chart>& chart) {
  std::vector<NamedState> out;
  for (const auto& zeta : lattice_lambda0(ctx.input)) {
    IntVec neg(zeta.size());
    for (size_t k = 0; k < zeta.size(); ++k) neg[k] = -zeta[k];
    out.push_back({"P" + vec_name(zeta), p_tilde(ctx, zeta)});
    out.push_back({"P" + vec_name(neg), p_tilde(ctx, neg)});
  }
  for (int k = 0; k < ctx.input.N; ++k) out.push_back({"H" + std::to_string(k + 1), h_tilde(ctx, k)});
  if (chart) {
    for (int f : chart->free_sites) {
      out.push_back({"astar" + std::to_string(f + 1), chart_astar(ctx, *chart, f)});
      out.push_back({"a" + std::to_string(f + 1), chart_a(ctx, *chart, f)});
    }
    for (int i = 0; i < ctx.input.M; ++i) out.push_back({"b" + std::to_string(i + 1), chart_b(ctx, *chart, i)});
  }
  return out;
}

std::vector<NamedState> closed_generators(const BRSTContext& ctx, const std::optional<Chart>& chart) {
  auto out = generator_candidates(ctx, chart);
  for (const auto& e : out)
    if (!differential(ctx, e.state).is_zero()) throw DomainError("generator " + e.name + " is not closed");
  return out;
}

ChartCheck chart_check(const BRSTContext& ctx, const Chart& chart) {
  ChartCheck r;
  const int M = ctx.input.M;
  std::vector<std::pair<std::string, FockState>> gens;
  std::vector<int> family, index;  // 0: astar, 1: a, 2: b
  for (int f : chart.free_sites) {
    gens.push_back({"astar" + std::to_string(f + 1), chart_astar(ctx, chart, f)});
    family.push_back(0);
    index.push_back(f);
    gens.push_back({"a" + std::to_string(f + 1), chart_a(ctx, chart, f)});
    family.push_back(1);
    index.push_back(f);
  }
  for (int i = 0; i < M; ++i) {
    gens.push_back({"b" + std::to_string(i + 1), chart_b(ctx, chart, i)});
    family.push_back(2);
    index.push_back(i);
  }
  for (size_t u = 0; u < gens.size(); ++u) {
    bool closed = differential(ctx, gens[u].second).is_zero();
    r.closed.push_back({gens[u].first, closed});
    if (!closed) r.mismatches.push_back(gens[u].first + " is not closed");
  }
  for (size_t u = 0; u < gens.size(); ++u)
    for (size_t v = 0; v < gens.size(); ++v) {
      std::map<long, FockState> expected;
      if (family[u] == 1 && family[v] == 0 && index[u] == index[v])
        expected[1] = FockState::of(Monomial(), HPoly::monomial(Rational(1), 1));
      if (family[u] == 0 && family[v] == 1 && index[u] == index[v])
        expected[1] = FockState::of(Monomial(), HPoly::monomial(Rational(-1), 1));
      if (family[u] == 2 && family[v] == 2 && ctx.vctx.gram[index[u]][index[v]] != 0)
        expected[2] = FockState::of(Monomial(), HPoly::monomial(Rational(ctx.vctx.gram[index[u]][index[v]]), 2));
      std::map<long, FockState> got;
      for (auto& [pole, st] : ope(ctx.vctx, gens[u].second, gens[v].second)) got[pole] = st;
      ++r.ope_checks;
      if (got != expected) {
        ++r.ope_failures;
        if (r.mismatches.size() < 8) r.mismatches.push_back("ope(" + gens[u].first + ", " + gens[v].first + ")");
      }
    }
  return r;
}

}  // namespace htva
