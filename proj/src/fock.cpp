#include <htva/fock.hpp>

#include <algorithm>
#include <climits>
#include <functional>
#include <set>
#include <sstream>

namespace htva {

int conf2(Kind k) {
  switch (k) {
    case Kind::X:
    case Kind::Y:
      return 1;
    case Kind::C:
    case Kind::Psi:
      return 2;
    case Kind::PsiStar:
      return 0;
  }
  return 0;
}

int sweight2(Kind k) { return conf2(k); }

int ghost(Kind k) {
  if (k == Kind::PsiStar) return 1;
  if (k == Kind::Psi) return -1;
  return 0;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::X:
      return "x";
    case Kind::Y:
      return "y";
    case Kind::C:
      return "c";
    case Kind::PsiStar:
      return "psi*";
    case Kind::Psi:
      return "psi";
  }
  return "?";
}

bool Monomial::localized() const {
  return std::any_of(f.begin(), f.end(), [](const Factor& x) { return x.exp < 0; });
}

int Monomial::find(ModeKey k) const {
  auto it = std::lower_bound(f.begin(), f.end(), k, [](const Factor& a, ModeKey b) { return a.key < b; });
  if (it == f.end() || it->key != k) return -1;
  return static_cast<int>(it - f.begin());
}

int Monomial::odd_before(size_t pos) const {
  int c = 0;
  for (size_t i = 0; i < pos; ++i)
    if (key_odd(f[i].key)) ++c;
  return c;
}

int Monomial::exponent(ModeKey k) const {
  int i = find(k);
  return i < 0 ? 0 : f[i].exp;
}

int Monomial::max_depth() const {
  int d = 0;
  for (const auto& x : f) d = std::max(d, key_depth(x.key));
  return d;
}

int Monomial::conf2() const {
  int w = 0;
  for (const auto& x : f) w += x.exp * (htva::conf2(key_kind(x.key)) + 2 * (key_depth(x.key) - 1));
  return w;
}

int Monomial::intrinsic_s2() const {
  int w = 0;
  for (const auto& x : f) w += x.exp * sweight2(key_kind(x.key));
  return w;
}

int Monomial::ghost() const {
  int g = 0;
  for (const auto& x : f) g += x.exp * htva::ghost(key_kind(x.key));
  return g;
}

int Monomial::odd_count() const {
  int c = 0;
  for (const auto& x : f)
    if (key_odd(x.key)) c += x.exp;
  return c;
}

int monomial_product(const Monomial& a, const Monomial& b, Monomial* out) {
  out->f.clear();
  out->f.reserve(a.f.size() + b.f.size());
  int sign = 1;
  // Odd factors of b move left past odd factors of a with larger key.
  int odd_a_total = a.odd_count();
  int odd_a_seen = 0;
  size_t i = 0, j = 0;
  while (i < a.f.size() || j < b.f.size()) {
    if (j == b.f.size() || (i < a.f.size() && a.f[i].key < b.f[j].key)) {
      if (key_odd(a.f[i].key)) ++odd_a_seen;
      out->f.push_back(a.f[i++]);
    } else if (i == a.f.size() || b.f[j].key < a.f[i].key) {
      if (key_odd(b.f[j].key) && ((odd_a_total - odd_a_seen) & 1)) sign = -sign;
      out->f.push_back(b.f[j++]);
    } else {
      if (key_odd(a.f[i].key)) return 0;
      int e = a.f[i].exp + b.f[j].exp;
      if (e != 0) out->f.push_back({a.f[i].key, e});
      ++i;
      ++j;
    }
  }
  return sign;
}

int remove_factor(const Monomial& m, size_t pos, Monomial* out) {
  *out = m;
  int sign = key_odd(m.f[pos].key) && (m.odd_before(pos) & 1) ? -1 : 1;
  if (--out->f[pos].exp == 0) out->f.erase(out->f.begin() + static_cast<long>(pos));
  return sign;
}

FockState FockState::vacuum() { return of(Monomial{}, HPoly(1)); }

FockState FockState::of(const Monomial& m, const HPoly& c) {
  FockState s;
  s.add(m, c);
  return s;
}

FockState FockState::mode(Kind k, int site, int depth) {
  Monomial m;
  m.f.push_back({make_key(k, site, depth), 1});
  return of(m);
}

bool FockState::localized() const {
  return std::any_of(terms.begin(), terms.end(), [](const auto& t) { return t.first.localized(); });
}

void FockState::add(const Monomial& m, const HPoly& c) {
  if (c.is_zero()) return;
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms.erase(it);
}

FockState& FockState::operator+=(const FockState& o) {
  for (const auto& [m, c] : o.terms) add(m, c);
  return *this;
}

FockState& FockState::operator-=(const FockState& o) {
  for (const auto& [m, c] : o.terms) add(m, -c);
  return *this;
}

FockState& FockState::operator*=(const HPoly& c) {
  if (c.is_zero()) {
    terms.clear();
    return *this;
  }
  for (auto it = terms.begin(); it != terms.end();) {
    it->second *= c;
    if (it->second.is_zero()) it = terms.erase(it);
    else ++it;
  }
  return *this;
}

FockState FockState::operator-() const {
  FockState r = *this;
  for (auto& t : r.terms) t.second = -t.second;
  return r;
}

FockState FockState::specialize() const {
  FockState r;
  for (const auto& [m, c] : terms) r.add(m, HPoly(c.at_one()));
  return r;
}

FockState FockState::mod_hbar() const {
  FockState r;
  for (const auto& [m, c] : terms) r.add(m, HPoly(c[0]));
  return r;
}

int FockState::max_hbar_degree() const {
  int d = -1;
  for (const auto& t : terms) d = std::max(d, t.second.degree());
  return d;
}

int FockState::max_depth() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, t.first.max_depth());
  return d;
}

std::string FockState::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    for (const auto& x : m.f) {
      os << " " << kind_name(key_kind(x.key)) << key_site(x.key) + 1 << "[" << -key_depth(x.key) << "]";
      if (x.exp != 1) os << "^" << x.exp;
    }
  }
  return os.str();
}

FockState operator+(FockState a, const FockState& b) { return a += b; }
FockState operator-(FockState a, const FockState& b) { return a -= b; }
FockState operator*(const HPoly& c, FockState a) { return a *= c; }
FockState operator*(FockState a, const HPoly& c) { return a *= c; }

FockState normal_product(const FockState& a, const FockState& b) {
  FockState r;
  Monomial m;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      int s = monomial_product(ma, mb, &m);
      if (s == 0) continue;
      HPoly c = ca * cb;
      if (s < 0) c = -c;
      r.add(m, c);
    }
  return r;
}

void VertexContext::check(const Generator& g) const {
  int bound = (g.kind == Kind::X || g.kind == Kind::Y) ? N : M;
  if (g.site < 0 || g.site >= bound)
    throw InputError(std::string("generator ") + kind_name(g.kind) + std::to_string(g.site + 1) +
                     " out of range (max " + std::to_string(bound) + ")");
}

void VertexContext::check(const FockState& s) const {
  for (const auto& [m, c] : s.terms)
    for (const auto& x : m.f) {
      check(Generator{key_kind(x.key), key_site(x.key)});
      Kind k = key_kind(x.key);
      if (x.exp < 0 && !((k == Kind::X || k == Kind::Y) && key_depth(x.key) == 1))
        throw DomainError("negative exponent on a mode outside the localization set");
      if (is_odd(k) && x.exp != 1) throw DomainError("odd mode with exponent other than 1");
    }
}

namespace {

// Annihilation g_(n), n >= 0, on a single monomial.
void annihilate(const VertexContext& ctx, Generator g, long n, const Monomial& m, const HPoly& c, FockState& out) {
  auto hit = [&](ModeKey target, const HPoly& scalar) {
    int pos = m.find(target);
    if (pos < 0) return;
    const Factor& fac = m.f[pos];
    Monomial r = m;
    if (--r.f[pos].exp == 0) r.f.erase(r.f.begin() + pos);
    HPoly v = c * scalar;
    v *= Rational(fac.exp);
    if (is_odd(g.kind) && (m.odd_before(pos) & 1)) v = -v;
    out.add(r, v);
  };
  if (n > 4000) return;
  int depth = static_cast<int>(n) + 1;
  switch (g.kind) {
    case Kind::X:
      hit(make_key(Kind::Y, g.site, depth), HPoly::monomial(-1, 1));
      break;
    case Kind::Y:
      hit(make_key(Kind::X, g.site, depth), HPoly::monomial(1, 1));
      break;
    case Kind::Psi:
      hit(make_key(Kind::PsiStar, g.site, depth), HPoly::monomial(1, 1));
      break;
    case Kind::PsiStar:
      hit(make_key(Kind::Psi, g.site, depth), HPoly::monomial(1, 1));
      break;
    case Kind::C:
      if (n == 0) {
        if (ctx.charge && (*ctx.charge)[g.site] != 0) out.add(m, c * (*ctx.charge)[g.site]);
        break;
      }
      for (int j = 0; j < ctx.M; ++j) {
        long gij = ctx.gram[g.site][j];
        if (gij == 0) continue;
        hit(make_key(Kind::C, j, static_cast<int>(n)), HPoly::monomial(Rational(n * gij), 2));
      }
      break;
  }
}

}  // namespace

FockState apply_mode(const VertexContext& ctx, Generator g, long n, const FockState& s) {
  FockState out;
  if (n <= -1) {
    ModeKey k = make_key(g.kind, g.site, static_cast<int>(-n));
    Monomial single;
    single.f.push_back({k, 1});
    Monomial r;
    for (const auto& [m, c] : s.terms) {
      int sign = monomial_product(single, m, &r);
      if (sign == 0) continue;
      out.add(r, sign > 0 ? c : -c);
    }
    return out;
  }
  for (const auto& [m, c] : s.terms) annihilate(ctx, g, n, m, c, out);
  return out;
}

namespace {

struct Slot {
  Generator g;
  int m;  // derivative order: the factor is g_(-m-1)
};

// Possible annihilation indices p >= 0 of generator g acting nontrivially on s.
std::vector<int> annihilation_indices(const VertexContext& ctx, Generator g, const Monomial& s) {
  std::set<int> ps;
  for (const auto& x : s.f) {
    Kind k = key_kind(x.key);
    int site = key_site(x.key), d = key_depth(x.key);
    switch (g.kind) {
      case Kind::X:
        if (k == Kind::Y && site == g.site) ps.insert(d - 1);
        break;
      case Kind::Y:
        if (k == Kind::X && site == g.site) ps.insert(d - 1);
        break;
      case Kind::Psi:
        if (k == Kind::PsiStar && site == g.site) ps.insert(d - 1);
        break;
      case Kind::PsiStar:
        if (k == Kind::Psi && site == g.site) ps.insert(d - 1);
        break;
      case Kind::C:
        if (k == Kind::C && ctx.gram[g.site][site] != 0) ps.insert(d);
        break;
    }
  }
  if (g.kind == Kind::C && ctx.charge && (*ctx.charge)[g.site] != 0) ps.insert(0);
  return {ps.begin(), ps.end()};
}

std::vector<Slot> expand_slots(const Monomial& a) {
  std::vector<Slot> slots;
  for (const auto& x : a.f)
    for (int e = 0; e < x.exp; ++e) slots.push_back({{key_kind(x.key), key_site(x.key)}, key_depth(x.key) - 1});
  return slots;
}

void field_mode_term(const VertexContext& ctx, const std::vector<Slot>& slots, long n, const Monomial& sm,
                     const HPoly& sc, const HPoly& ac, FockState& out) {
  int k = static_cast<int>(slots.size());
  long target = n + 1 - k;
  std::vector<std::vector<int>> allowed(k);
  for (int i = 0; i < k; ++i) allowed[i] = annihilation_indices(ctx, slots[i].g, sm);
  FockState start = FockState::of(sm, sc);
  std::vector<long> p(k, 0);
  std::vector<bool> ann(k, false);

  auto finish = [&]() {
    // Sign: odd annihilations moving right past later odd creations.
    int inv = 0;
    for (int i = 0; i < k; ++i) {
      if (!ann[i] || !is_odd(slots[i].g.kind)) continue;
      for (int j = i + 1; j < k; ++j)
        if (!ann[j] && is_odd(slots[j].g.kind)) ++inv;
    }
    Rational coef = (inv & 1) ? -1 : 1;
    for (int i = 0; i < k; ++i) {
      long j = p[i] + slots[i].m;
      Rational b(binomial(j, slots[i].m));
      if (slots[i].m & 1) b = -b;
      coef *= b;
    }
    if (coef == 0) return;
    FockState st = start;
    for (int i = k - 1; i >= 0 && !st.is_zero(); --i)
      if (ann[i]) st = apply_mode(ctx, slots[i].g, p[i], st);
    for (int i = k - 1; i >= 0 && !st.is_zero(); --i)
      if (!ann[i]) st = apply_mode(ctx, slots[i].g, p[i], st);
    if (st.is_zero()) return;
    out += (ac * coef) * st;
  };

  std::vector<int> creation;
  std::function<void(size_t, long)> compose = [&](size_t idx, long remaining) {
    if (idx == creation.size()) {
      if (remaining == 0) finish();
      return;
    }
    size_t left = creation.size() - idx - 1;
    // j <= -1 for this slot and the rest each need at most -1.
    for (long j = -1; j >= remaining + static_cast<long>(left); --j) {
      int i = creation[idx];
      p[i] = j - slots[i].m;
      compose(idx + 1, remaining - j);
    }
  };

  std::function<void(int, long)> rec = [&](int i, long sum) {
    if (i == k) {
      creation.clear();
      for (int t = 0; t < k; ++t)
        if (!ann[t]) creation.push_back(t);
      long rem = target - sum;
      if (creation.empty()) {
        if (rem == 0) finish();
        return;
      }
      if (rem > -static_cast<long>(creation.size())) return;
      compose(0, rem);
      return;
    }
    ann[i] = false;
    rec(i + 1, sum);
    ann[i] = true;
    for (int pp : allowed[i]) {
      p[i] = pp;
      rec(i + 1, sum + pp + slots[i].m);
    }
    ann[i] = false;
  };
  rec(0, 0);
}

}  // namespace

FockState field_mode(const VertexContext& ctx, const FockState& a, long n, const FockState& s) {
  if (a.localized()) throw DomainError("field reconstruction needs a left argument without inverted modes");
  FockState out;
  for (const auto& [am, ac] : a.terms) {
    std::vector<Slot> slots = expand_slots(am);
    for (const auto& [sm, sc] : s.terms) field_mode_term(ctx, slots, n, sm, sc, ac, out);
  }
  return out;
}

long max_product_index(const VertexContext& ctx, const FockState& a, const FockState& s) {
  if (a.localized()) {
    auto sing = wick_singular(ctx, a, s);
    return sing.empty() ? -1 : sing.rbegin()->first;
  }
  long best = -1;
  for (const auto& [am, ac] : a.terms) {
    std::vector<Slot> slots = expand_slots(am);
    for (const auto& [sm, sc] : s.terms) {
      long total = 0;
      for (const auto& sl : slots) {
        auto al = annihilation_indices(ctx, sl.g, sm);
        if (!al.empty()) total += sl.m + al.back() + 1;
      }
      best = std::max(best, total - 1);
    }
  }
  return best;
}

FockState nth_product(const VertexContext& ctx, const FockState& a, const FockState& b, long n) {
  if (a.localized()) return wick_product(ctx, a, b, n);
  return field_mode(ctx, a, n, b);
}

std::vector<std::pair<long, FockState>> ope(const VertexContext& ctx, const FockState& a, const FockState& b) {
  std::vector<std::pair<long, FockState>> out;
  if (a.localized()) {
    for (auto& [n, st] : wick_singular(ctx, a, b)) out.emplace_back(n + 1, st);
    return out;
  }
  long nmax = max_product_index(ctx, a, b);
  for (long n = 0; n <= nmax; ++n) {
    FockState r = field_mode(ctx, a, n, b);
    if (!r.is_zero()) out.emplace_back(n + 1, std::move(r));
  }
  return out;
}

FockState translation(const FockState& a) {
  FockState out;
  Monomial rest, res;
  for (const auto& [m, c] : a.terms) {
    for (size_t pos = 0; pos < m.f.size(); ++pos) {
      const Factor& x = m.f[pos];
      int d = key_depth(x.key);
      int s1 = remove_factor(m, pos, &rest);
      Monomial single;
      single.f.push_back({make_key(key_kind(x.key), key_site(x.key), d + 1), 1});
      int s2 = monomial_product(single, rest, &res);
      if (s2 == 0) continue;
      HPoly v = c * Rational(static_cast<long>(x.exp) * d);
      if (s1 * s2 < 0) v = -v;
      out.add(res, v);
    }
  }
  return out;
}

FockState divided_translation(const FockState& a, int k) {
  FockState r = a;
  for (int i = 0; i < k && !r.is_zero(); ++i) r = translation(r);
  if (k > 1) r *= HPoly(ratio(1, factorial(k)));
  return r;
}

Gradings gradings(const FockState& a) {
  Gradings g;
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& [m, c] : a.terms)
    for (int k = 0; k <= c.degree(); ++k)
      if (c[k] != 0) seen.insert({m.conf2(), m.intrinsic_s2() + 2 * k, m.ghost()});
  if (seen.empty()) seen.insert({0, 0, 0});
  g.distinct.assign(seen.begin(), seen.end());
  g.homogeneous = seen.size() == 1;
  std::tie(g.conf2, g.s2, g.ghost) = g.distinct.front();
  return g;
}

FockState dlog(const Monomial& m) {
  FockState out;
  for (const auto& x : m.f) {
    Kind k = key_kind(x.key);
    if (!((k == Kind::X || k == Kind::Y) && key_depth(x.key) == 1))
      throw DomainError("dlog: factor outside the localization set");
    Monomial t;
    t.f.push_back({x.key, -1});
    t.f.push_back({make_key(k, key_site(x.key), 2), 1});
    out.add(t, HPoly(Rational(x.exp)));
  }
  return out;
}

FockState hbar_divide(const FockState& a, int k) {
  FockState r;
  for (const auto& [m, c] : a.terms) r.add(m, c.shifted(-k));
  return r;
}

FockState fock_action(const VertexContext& ctx, const FockState& a, long n, const RatVec& lambda, const FockState& v) {
  if (static_cast<int>(lambda.size()) != ctx.M) throw InputError("highest weight has wrong length");
  if (a.localized()) throw DomainError("Fock action needs a in chart-local generator form");
  for (const auto& [m, c] : a.terms)
    for (const auto& x : m.f)
      if (key_kind(x.key) == Kind::Psi || key_kind(x.key) == Kind::PsiStar)
        throw DomainError("Fock action: ghosts are not chart generators");
  VertexContext mod = ctx;
  mod.charge = lambda;
  return field_mode(mod, a.specialize(), n, v.specialize()).specialize();
}

int parity(const FockState& a) {
  int p = -1;
  for (const auto& t : a.terms) {
    int q = t.first.odd_count() & 1;
    if (p >= 0 && p != q) throw DomainError("state has mixed parity");
    p = q;
  }
  return p < 0 ? 0 : p;
}

}  // namespace htva
