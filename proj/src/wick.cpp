#include <htva/fock.hpp>

#include <algorithm>
#include <functional>

namespace htva {

namespace {

struct Propagator {
  HPoly kappa;
  int order = 0;
};

// Contraction of g(z) with h(w) for generators at the given sites.
Propagator base_propagator(const VertexContext& ctx, ModeKey u, ModeKey v) {
  Kind a = key_kind(u), b = key_kind(v);
  int i = key_site(u), j = key_site(v);
  if (a == Kind::X && b == Kind::Y && i == j) return {HPoly::monomial(-1, 1), 1};
  if (a == Kind::Y && b == Kind::X && i == j) return {HPoly::monomial(1, 1), 1};
  if (a == Kind::C && b == Kind::C && ctx.gram[i][j] != 0) return {HPoly::monomial(Rational(ctx.gram[i][j]), 2), 2};
  if (a == Kind::Psi && b == Kind::PsiStar && i == j) return {HPoly::monomial(1, 1), 1};
  if (a == Kind::PsiStar && b == Kind::Psi && i == j) return {HPoly::monomial(1, 1), 1};
  return {};
}

// <d^(p) g(z) d^(q) h(w)> = kappa (-1)^p (r)_{p+q} / (p! q!) (z-w)^{-(r+p+q)}.
Propagator propagator(const VertexContext& ctx, ModeKey u, ModeKey v) {
  Propagator b = base_propagator(ctx, u, v);
  if (b.kappa.is_zero()) return b;
  int p = key_depth(u) - 1, q = key_depth(v) - 1;
  Rational f = ratio(rising(b.order, p + q), factorial(p) * factorial(q));
  if (p & 1) f = -f;
  return {b.kappa * f, b.order + p + q};
}

struct PairCand {
  size_t u, v;  // indices into the even factor lists
  Propagator prop;
};

int permutation_sign(const std::vector<int>& seq) {
  int inv = 0;
  for (size_t i = 0; i < seq.size(); ++i)
    for (size_t j = i + 1; j < seq.size(); ++j)
      if (seq[i] > seq[j]) ++inv;
  return (inv & 1) ? -1 : 1;
}

// Collects terms coeff * (z-w)^{-R} :A'(z) B'(w): for monomials A, B.
void contractions(const VertexContext& ctx, const Monomial& A, const Monomial& B,
                  const std::function<void(const HPoly&, int, const Monomial&, const Monomial&)>& emit) {
  std::vector<Factor> ae, be;
  std::vector<ModeKey> ao, bo;
  for (const auto& x : A.f) (key_odd(x.key) ? ao.push_back(x.key) : ae.push_back(x));
  for (const auto& x : B.f) (key_odd(x.key) ? bo.push_back(x.key) : be.push_back(x));

  std::vector<PairCand> cands;
  for (size_t u = 0; u < ae.size(); ++u)
    for (size_t v = 0; v < be.size(); ++v) {
      Propagator p = propagator(ctx, ae[u].key, be[v].key);
      if (p.kappa.is_zero()) continue;
      if (ae[u].exp < 0 && be[v].exp < 0)
        throw DomainError("Wick contraction between two inverted modes is not a finite sum");
      cands.push_back({u, v, p});
    }

  // Odd matchings first; each yields a sign, a propagator product and leftover lists.
  struct OddChoice {
    HPoly coef;
    int order;
    std::vector<bool> a_used, b_used;
  };
  std::vector<OddChoice> odd_choices;
  {
    std::vector<int> match(ao.size(), -1);
    std::vector<bool> bused(bo.size(), false);
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == ao.size()) {
        HPoly c(1);
        int order = 0;
        std::vector<int> seq;
        std::vector<bool> au(ao.size(), false);
        for (size_t a = 0; a < ao.size(); ++a) {
          if (match[a] < 0) continue;
          Propagator p = propagator(ctx, ao[a], bo[match[a]]);
          c *= p.kappa;
          order += p.order;
          seq.push_back(static_cast<int>(a));
          seq.push_back(static_cast<int>(ao.size()) + match[a]);
          au[a] = true;
        }
        for (size_t a = 0; a < ao.size(); ++a)
          if (match[a] < 0) seq.push_back(static_cast<int>(a));
        for (size_t b = 0; b < bo.size(); ++b)
          if (!bused[b]) seq.push_back(static_cast<int>(ao.size() + b));
        if (permutation_sign(seq) < 0) c = -c;
        odd_choices.push_back({c, order, au, bused});
        return;
      }
      match[i] = -1;
      rec(i + 1);
      for (size_t b = 0; b < bo.size(); ++b) {
        if (bused[b]) continue;
        if (propagator(ctx, ao[i], bo[b]).kappa.is_zero()) continue;
        match[i] = static_cast<int>(b);
        bused[b] = true;
        rec(i + 1);
        bused[b] = false;
        match[i] = -1;
      }
    };
    rec(0);
  }

  // Even contraction multiplicities.
  std::vector<int> k(cands.size(), 0);
  std::vector<long> used_u(ae.size(), 0), used_v(be.size(), 0);
  std::function<void(size_t)> rec = [&](size_t c) {
    if (c == cands.size()) {
      HPoly coef(1);
      int order = 0;
      for (size_t t = 0; t < cands.size(); ++t) {
        if (k[t] == 0) continue;
        HPoly pw(1);
        for (int r = 0; r < k[t]; ++r) pw *= cands[t].prop.kappa;
        coef *= pw * ratio(1, factorial(k[t]));
        order += k[t] * cands[t].prop.order;
      }
      Rational ff = 1;
      for (size_t u = 0; u < ae.size(); ++u) ff *= Rational(falling(ae[u].exp, used_u[u]));
      for (size_t v = 0; v < be.size(); ++v) ff *= Rational(falling(be[v].exp, used_v[v]));
      if (ff == 0) return;
      coef *= ff;
      Monomial a2, b2;
      for (size_t u = 0; u < ae.size(); ++u)
        if (ae[u].exp - used_u[u] != 0) a2.f.push_back({ae[u].key, static_cast<int>(ae[u].exp - used_u[u])});
      for (size_t v = 0; v < be.size(); ++v)
        if (be[v].exp - used_v[v] != 0) b2.f.push_back({be[v].key, static_cast<int>(be[v].exp - used_v[v])});
      for (const auto& oc : odd_choices) {
        Monomial a3 = a2, b3 = b2;
        for (size_t a = 0; a < ao.size(); ++a)
          if (!oc.a_used[a]) a3.f.push_back({ao[a], 1});
        for (size_t b = 0; b < bo.size(); ++b)
          if (!oc.b_used[b]) b3.f.push_back({bo[b], 1});
        emit(coef * oc.coef, order + oc.order, a3, b3);
      }
      return;
    }
    const PairCand& pc = cands[c];
    long cap_u = ae[pc.u].exp >= 0 ? ae[pc.u].exp - used_u[pc.u] : -1;
    long cap_v = be[pc.v].exp >= 0 ? be[pc.v].exp - used_v[pc.v] : -1;
    long cap = cap_u < 0 ? cap_v : (cap_v < 0 ? cap_u : std::min(cap_u, cap_v));
    for (long t = 0; t <= cap; ++t) {
      k[c] = static_cast<int>(t);
      used_u[pc.u] += t;
      used_v[pc.v] += t;
      rec(c + 1);
      used_u[pc.u] -= t;
      used_v[pc.v] -= t;
    }
    k[c] = 0;
  };
  rec(0);
}

}  // namespace

FockState wick_product(const VertexContext& ctx, const FockState& a, const FockState& b, long n) {
  if (ctx.charge) throw DomainError("Wick route is only available on the vacuum module");
  FockState out;
  for (const auto& [am, ac] : a.terms)
    for (const auto& [bm, bc] : b.terms)
      contractions(ctx, am, bm, [&](const HPoly& coef, int order, const Monomial& a2, const Monomial& b2) {
        long k = order - n - 1;
        if (k < 0) return;
        FockState da = divided_translation(FockState::of(a2), static_cast<int>(k));
        FockState prod = normal_product(da, FockState::of(b2));
        out += (ac * bc * coef) * prod;
      });
  return out;
}

std::map<long, FockState> wick_singular(const VertexContext& ctx, const FockState& a, const FockState& b) {
  if (ctx.charge) throw DomainError("Wick route is only available on the vacuum module");
  std::map<long, FockState> out;
  for (const auto& [am, ac] : a.terms)
    for (const auto& [bm, bc] : b.terms)
      contractions(ctx, am, bm, [&](const HPoly& coef, int order, const Monomial& a2, const Monomial& b2) {
        for (long n = 0; n < order; ++n) {
          long k = order - n - 1;
          FockState da = divided_translation(FockState::of(a2), static_cast<int>(k));
          out[n] += (ac * bc * coef) * normal_product(da, FockState::of(b2));
        }
      });
  for (auto it = out.begin(); it != out.end();) {
    if (it->second.is_zero()) it = out.erase(it);
    else ++it;
  }
  return out;
}

}  // namespace htva
