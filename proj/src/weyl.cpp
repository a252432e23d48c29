#include <htva/linalg.hpp>
#include <htva/weyl.hpp>

#include <functional>
#include <set>
#include <sstream>

namespace htva {

MPoly MPoly::constant(int n, const Rational& c) {
  MPoly p(n);
  p.add(std::vector<int>(n, 0), c);
  return p;
}

MPoly MPoly::variable(int n, int i) {
  MPoly p(n);
  std::vector<int> e(n, 0);
  e[i] = 1;
  p.add(e, Rational(1));
  return p;
}

void MPoly::add(const std::vector<int>& e, const Rational& c) {
  if (c == 0) return;
  auto it = terms.find(e);
  if (it == terms.end()) {
    terms.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms.erase(it);
}

MPoly& MPoly::operator+=(const MPoly& o) {
  for (const auto& [e, c] : o.terms) add(e, c);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  for (const auto& [e, c] : o.terms) add(e, -c);
  return *this;
}

MPoly MPoly::operator*(const MPoly& o) const {
  MPoly r(nvars);
  for (const auto& [e1, c1] : terms)
    for (const auto& [e2, c2] : o.terms) {
      std::vector<int> e(e1);
      for (int i = 0; i < nvars; ++i) e[i] += e2[i];
      r.add(e, c1 * c2);
    }
  return r;
}

MPoly MPoly::operator+(const MPoly& o) const {
  MPoly r = *this;
  r += o;
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
  MPoly r = *this;
  r -= o;
  return r;
}

MPoly MPoly::scaled(const Rational& c) const {
  MPoly r(nvars);
  for (const auto& [e, v] : terms) r.add(e, v * c);
  return r;
}

MPoly MPoly::pow(int k) const {
  MPoly r = constant(nvars, Rational(1));
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

MPoly MPoly::substitute(const std::vector<MPoly>& images) const {
  int n = images.empty() ? nvars : images[0].nvars;
  MPoly r(n);
  std::vector<std::map<int, MPoly>> powers(nvars);
  auto power = [&](int i, int k) -> const MPoly& {
    auto it = powers[i].find(k);
    if (it != powers[i].end()) return it->second;
    return powers[i].emplace(k, images[i].pow(k)).first->second;
  };
  for (const auto& [e, c] : terms) {
    MPoly t = constant(n, c);
    for (int i = 0; i < nvars; ++i)
      if (e[i]) t = t * power(i, e[i]);
    r += t;
  }
  return r;
}

int MPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

std::string MPoly::str(const std::vector<std::string>& names) const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(c) << ")";
    for (int i = 0; i < nvars; ++i)
      if (e[i]) os << "*" << names[i] << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
  }
  return os.str();
}

WeylElement WeylElement::scalar(int n, int m, const Rational& c) {
  WeylElement w(n, m);
  w.add(std::vector<int>(2 * n + m, 0), c);
  return w;
}

WeylElement WeylElement::x(int n, int m, int k) {
  WeylElement w(n, m);
  std::vector<int> e(2 * n + m, 0);
  e[k] = 1;
  w.add(e, Rational(1));
  return w;
}

WeylElement WeylElement::d(int n, int m, int k) {
  WeylElement w(n, m);
  std::vector<int> e(2 * n + m, 0);
  e[n + k] = 1;
  w.add(e, Rational(1));
  return w;
}

WeylElement WeylElement::c(int n, int m, int i) {
  WeylElement w(n, m);
  std::vector<int> e(2 * n + m, 0);
  e[2 * n + i] = 1;
  w.add(e, Rational(1));
  return w;
}

void WeylElement::add(const std::vector<int>& key, const Rational& c) {
  if (c == 0) return;
  auto it = terms.find(key);
  if (it == terms.end()) {
    terms.emplace(key, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms.erase(it);
}

WeylElement& WeylElement::operator+=(const WeylElement& o) {
  for (const auto& [k, c] : o.terms) add(k, c);
  return *this;
}

WeylElement& WeylElement::operator-=(const WeylElement& o) {
  for (const auto& [k, c] : o.terms) add(k, -c);
  return *this;
}

WeylElement WeylElement::operator+(const WeylElement& o) const {
  WeylElement r = *this;
  r += o;
  return r;
}

WeylElement WeylElement::operator-(const WeylElement& o) const {
  WeylElement r = *this;
  r -= o;
  return r;
}

WeylElement WeylElement::scaled(const Rational& c) const {
  WeylElement r(N, M);
  for (const auto& [k, v] : terms) r.add(k, v * c);
  return r;
}

std::string WeylElement::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(c) << ")";
    for (int k = 0; k < N; ++k)
      if (e[k]) os << "*x" << k + 1 << (e[k] > 1 ? "^" + std::to_string(e[k]) : "");
    for (int k = 0; k < N; ++k)
      if (e[N + k]) os << "*d" << k + 1 << (e[N + k] > 1 ? "^" + std::to_string(e[N + k]) : "");
    for (int i = 0; i < M; ++i)
      if (e[2 * N + i]) os << "*c" << i + 1 << (e[2 * N + i] > 1 ? "^" + std::to_string(e[2 * N + i]) : "");
  }
  return os.str();
}

WeylElement weyl_mul(const WeylElement& a, const WeylElement& b) {
  if (a.N != b.N || a.M != b.M) throw InputError("Weyl elements from different algebras");
  int N = a.N, M = a.M;
  WeylElement r(N, M);
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      // d^B x^A' = sum_k prod_i binom(B_i, k_i) falling(A'_i, k_i) x^{A'-k} d^{B-k}
      std::vector<int> k(N, 0);
      std::function<void(int, Rational)> rec = [&](int i, Rational coeff) {
        if (i == N) {
          std::vector<int> key(2 * N + M);
          for (int j = 0; j < N; ++j) {
            key[j] = ka[j] + kb[j] - k[j];
            key[N + j] = ka[N + j] - k[j] + kb[N + j];
          }
          for (int j = 0; j < M; ++j) key[2 * N + j] = ka[2 * N + j] + kb[2 * N + j];
          r.add(key, coeff);
          return;
        }
        int top = std::min(ka[N + i], kb[i]);
        for (int t = 0; t <= top; ++t) {
          k[i] = t;
          rec(i + 1, coeff * Rational(binomial(static_cast<long>(ka[N + i]), t)) * Rational(falling(kb[i], t)));
        }
        k[i] = 0;
      };
      rec(0, ca * cb);
    }
  return r;
}

WeylElement weyl_commutator(const WeylElement& a, const WeylElement& b) { return weyl_mul(a, b) - weyl_mul(b, a); }

WeylElement shift_c(const WeylElement& a, const RatVec& shift) {
  int N = a.N, M = a.M;
  WeylElement r(N, M);
  for (const auto& [key, c] : a.terms) {
    std::vector<int> base(key);
    for (int i = 0; i < M; ++i) base[2 * N + i] = 0;
    std::vector<int> e(M, 0);
    std::function<void(int, Rational)> rec = [&](int i, Rational coeff) {
      if (i == M) {
        std::vector<int> k(base);
        for (int j = 0; j < M; ++j) k[2 * N + j] = e[j];
        r.add(k, coeff);
        return;
      }
      int top = key[2 * N + i];
      for (int t = 0; t <= top; ++t) {
        e[i] = t;
        Rational s = 1;
        for (int u = 0; u < top - t; ++u) s *= shift[i];
        rec(i + 1, coeff * Rational(binomial(static_cast<long>(top), t)) * s);
      }
    };
    rec(0, c);
  }
  return r;
}

void ReducedElement::add(const IntVec& zeta, const MPoly& p) {
  if (p.is_zero()) return;
  auto it = components.find(zeta);
  if (it == components.end()) {
    components.emplace(zeta, p);
    return;
  }
  it->second += p;
  if (it->second.is_zero()) components.erase(it);
}

ReducedElement ReducedElement::operator+(const ReducedElement& o) const {
  ReducedElement r = *this;
  for (const auto& [z, p] : o.components) r.add(z, p);
  return r;
}

ReducedElement ReducedElement::operator-(const ReducedElement& o) const {
  ReducedElement r = *this;
  for (const auto& [z, p] : o.components) r.add(z, p.scaled(Rational(-1)));
  return r;
}

std::string ReducedElement::str() const {
  if (components.empty()) return "0";
  std::vector<std::string> names;
  for (int k = 0; k < N; ++k) names.push_back("H" + std::to_string(k + 1));
  for (int i = 0; i < M; ++i) names.push_back("c" + std::to_string(i + 1));
  std::ostringstream os;
  bool first = true;
  for (const auto& [z, p] : components) {
    if (!first) os << " + ";
    first = false;
    os << "[" << p.str(names) << "]*P(";
    for (size_t k = 0; k < z.size(); ++k) os << (k ? "," : "") << z[k];
    os << ")";
  }
  return os.str();
}

std::vector<int> pivot_sites(const HypertoricInput& in) {
  for (const auto& J : subsets(in.N, in.M)) {
    IntMat minor(in.M, IntVec(in.M));
    for (int i = 0; i < in.M; ++i)
      for (int j = 0; j < in.M; ++j) minor[i][j] = in.delta[i][J[j]];
    Integer det = determinant(minor);
    if (det == 1 || det == -1) return J;
  }
  throw DomainError("no unimodular minor; the quantized algebra needs a unimodular matrix");
}

namespace {

// u (u - 1) ... (u - n + 1) with u = variable + offset
MPoly falling_poly(int nvars, int var, long offset, int n) {
  MPoly r = MPoly::constant(nvars, Rational(1));
  MPoly v = MPoly::variable(nvars, var);
  for (int t = 0; t < n; ++t) r = r * (v + MPoly::constant(nvars, Rational(offset - t)));
  return r;
}

bool in_lambda0(const HypertoricInput& in, const IntVec& zeta) {
  for (int i = 0; i < in.M; ++i) {
    long s = 0;
    for (int k = 0; k < in.N; ++k) s += in.delta[i][k] * zeta[k];
    if (s != 0) return false;
  }
  return true;
}

}  // namespace

ReducedElement reduce_mod_ideal(const HypertoricInput& in, const WeylElement& a) {
  int N = in.N, M = in.M, nv = N + M;
  if (a.N != N || a.M != M) throw InputError("Weyl element does not match the input");
  std::map<IntVec, MPoly> theta_form;
  for (const auto& [key, coeff] : a.terms) {
    IntVec zeta(N);
    for (int k = 0; k < N; ++k) zeta[k] = key[k] - key[N + k];
    if (!in_lambda0(in, zeta)) throw DomainError("element is not invariant under the torus action");
    MPoly p = MPoly::constant(nv, coeff);
    for (int k = 0; k < N; ++k) {
      int ak = key[k], bk = key[N + k];
      if (ak >= bk)
        p = p * falling_poly(nv, k, -zeta[k], bk);  // x^r [theta]_b = [theta - r]_b x^r
      else
        p = p * falling_poly(nv, k, 0, ak);
    }
    std::vector<int> ce(nv, 0);
    for (int i = 0; i < M; ++i) ce[N + i] = key[2 * N + i];
    MPoly cm(nv);
    cm.add(ce, Rational(1));
    p = p * cm;
    auto it = theta_form.find(zeta);
    if (it == theta_form.end())
      theta_form.emplace(zeta, p);
    else
      it->second += p;
  }

  std::vector<int> J = pivot_sites(in);
  std::vector<bool> is_pivot(N, false);
  for (int j : J) is_pivot[j] = true;
  RatMat dj(M, RatVec(M));
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) dj[i][j] = in.delta[i][J[j]];
  RatMat djinv = *inverse(dj);
  // theta_J = Delta_J^{-1} (c - sum_{k not in J} Delta_k theta_k)
  std::vector<MPoly> step1(nv);
  for (int v = 0; v < nv; ++v) step1[v] = MPoly::variable(nv, v);
  for (int p = 0; p < M; ++p) {
    MPoly img(nv);
    for (int i = 0; i < M; ++i) {
      if (djinv[p][i] == 0) continue;
      MPoly row = MPoly::variable(nv, N + i);
      for (int k = 0; k < N; ++k)
        if (!is_pivot[k] && in.delta[i][k] != 0) row -= MPoly::variable(nv, k).scaled(Rational(in.delta[i][k]));
      img += row.scaled(djinv[p][i]);
    }
    step1[J[p]] = img;
  }
  std::vector<MPoly> step2(nv);
  for (int v = 0; v < nv; ++v) step2[v] = MPoly::variable(nv, v);
  for (int k = 0; k < N; ++k) {
    if (is_pivot[k]) continue;
    RatVec beta = euler_beta(in, k);
    for (int i = 0; i < M; ++i) step2[k] += MPoly::variable(nv, N + i).scaled(beta[i]);
  }
  ReducedElement r;
  r.N = N;
  r.M = M;
  for (auto& [zeta, p] : theta_form) r.add(zeta, p.substitute(step1).substitute(step2));
  return r;
}

WeylElement p_zeta(const HypertoricInput& in, const IntVec& zeta) {
  if (static_cast<int>(zeta.size()) != in.N || !in_lambda0(in, zeta))
    throw InputError("vector is not in the lattice Lambda_0");
  WeylElement w(in.N, in.M);
  std::vector<int> key(2 * in.N + in.M, 0);
  for (int k = 0; k < in.N; ++k) {
    if (zeta[k] > 0) key[k] = static_cast<int>(zeta[k]);
    if (zeta[k] < 0) key[in.N + k] = static_cast<int>(-zeta[k]);
  }
  w.add(key, Rational(1));
  return w;
}

WeylElement h_k(const HypertoricInput& in, int k) {
  if (k < 0 || k >= in.N) throw InputError("site index out of range");
  WeylElement w = weyl_mul(WeylElement::x(in.N, in.M, k), WeylElement::d(in.N, in.M, k));
  RatVec beta = euler_beta(in, k);
  for (int i = 0; i < in.M; ++i) w -= WeylElement::c(in.N, in.M, i).scaled(beta[i]);
  return w;
}

WeylElement lift(const HypertoricInput& in, const ReducedElement& r) {
  int N = in.N, M = in.M;
  std::vector<WeylElement> vars;
  for (int k = 0; k < N; ++k) vars.push_back(h_k(in, k));
  for (int i = 0; i < M; ++i) vars.push_back(WeylElement::c(N, M, i));
  WeylElement out(N, M);
  for (const auto& [zeta, p] : r.components) {
    WeylElement poly(N, M);
    for (const auto& [e, c] : p.terms) {
      WeylElement t = WeylElement::scalar(N, M, c);
      for (int v = 0; v < N + M; ++v)
        for (int s = 0; s < e[v]; ++s) t = weyl_mul(t, vars[v]);
      poly += t;
    }
    out += weyl_mul(poly, p_zeta(in, zeta));
  }
  return out;
}

namespace {

// Images of x_k, d_k, c_i under a lifted action.
struct ActionImages {
  std::vector<WeylElement> x, d, c;
};

ActionImages images(const WeylAction& act, int N, int M) {
  ActionImages im;
  for (int k = 0; k < N; ++k) {
    int t = act.sigma.perm[k];
    int s = act.sigma.signs[t];
    Rational tk(act.torus_sign[k]);
    if (s == 1) {
      im.x.push_back(WeylElement::x(N, M, t).scaled(tk));
      im.d.push_back(WeylElement::d(N, M, t).scaled(tk));
    } else {
      im.x.push_back(WeylElement::d(N, M, t).scaled(-tk));
      im.d.push_back(WeylElement::x(N, M, t).scaled(tk));
    }
  }
  for (int i = 0; i < M; ++i) {
    WeylElement ci = WeylElement::scalar(N, M, act.c_shift[i]);
    for (int j = 0; j < M; ++j)
      if (act.c_linear[i][j]) ci += WeylElement::c(N, M, j).scaled(Rational(act.c_linear[i][j]));
    im.c.push_back(ci);
  }
  return im;
}

// Solve A tau = b over GF(2); returns false if inconsistent.
bool solve_gf2(std::vector<std::vector<int>> a, std::vector<int> b, int n, std::vector<int>* tau) {
  int rows = static_cast<int>(a.size());
  std::vector<int> pivcol;
  int r = 0;
  for (int c = 0; c < n && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c]) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[r]);
    std::swap(b[p], b[r]);
    for (int i = 0; i < rows; ++i)
      if (i != r && a[i][c]) {
        for (int j = 0; j < n; ++j) a[i][j] ^= a[r][j];
        b[i] ^= b[r];
      }
    pivcol.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (b[i]) return false;
  tau->assign(n, 0);
  for (int i = 0; i < r; ++i) (*tau)[pivcol[i]] = b[i];
  return true;
}

}  // namespace

std::vector<IntVec> lambda0_window(const HypertoricInput& in, int window) {
  IntMat basis = lattice_lambda0(in);
  std::vector<IntVec> out;
  int r = static_cast<int>(basis.size());
  std::vector<long> coeff(r, -window);
  if (r == 0) return out;
  while (true) {
    IntVec v(in.N, 0);
    bool nonzero = false;
    for (int b = 0; b < r; ++b)
      for (int k = 0; k < in.N; ++k) v[k] += coeff[b] * basis[b][k];
    for (long x : v) nonzero = nonzero || x != 0;
    if (nonzero) out.push_back(v);
    int b = 0;
    while (b < r && coeff[b] == window) coeff[b++] = -window;
    if (b == r) break;
    ++coeff[b];
  }
  std::sort(out.begin(), out.end());
  return out;
}

WeylElement apply_action(const WeylAction& act, const WeylElement& a) {
  int N = a.N, M = a.M;
  ActionImages im = images(act, N, M);
  WeylElement out(N, M);
  for (const auto& [key, c] : a.terms) {
    WeylElement t = WeylElement::scalar(N, M, c);
    for (int k = 0; k < N; ++k)
      for (int s = 0; s < key[k]; ++s) t = weyl_mul(t, im.x[k]);
    for (int k = 0; k < N; ++k)
      for (int s = 0; s < key[N + k]; ++s) t = weyl_mul(t, im.d[k]);
    for (int i = 0; i < M; ++i)
      for (int s = 0; s < key[2 * N + i]; ++s) t = weyl_mul(t, im.c[i]);
    out += t;
  }
  return out;
}

WeylAction weyl_action(const HypertoricInput& in, const SignedPermutation& sigma) {
  int N = in.N, M = in.M;
  WeylAction act;
  act.sigma = sigma;
  act.torus_sign.assign(N, 1);
  // c relabelling: sigma(Delta row i) = sum_j L_ij Delta row j
  RatMat dt(N, RatVec(M));
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < M; ++j) dt[k][j] = in.delta[j][k];
  act.c_linear.assign(M, IntVec(M, 0));
  act.c_shift.assign(M, Rational(0));
  for (int i = 0; i < M; ++i) {
    IntVec w = sigma.apply(in.delta[i]);
    RatVec wr(w.begin(), w.end());
    auto sol = solve(dt, wr);
    if (!sol) throw DomainError("signed permutation does not preserve the row lattice");
    for (int j = 0; j < M; ++j) {
      if ((*sol)[j].get_den() != 1) throw DomainError("row lattice relabelling is not integral");
      act.c_linear[i][j] = (*sol)[j].get_num().get_si();
    }
    long flipped = 0;
    for (int k = 0; k < N; ++k)
      if (sigma.signs[sigma.perm[k]] == -1) flipped += in.delta[i][k];
    act.c_shift[i] = Rational(-flipped);
  }
  // torus sign lift so that sigma(P_zeta) = P_zeta on a window of Lambda_0
  std::vector<std::vector<int>> rows;
  std::vector<int> rhs;
  for (const auto& zeta : lambda0_window(in, 1)) {
    WeylElement img = apply_action(act, p_zeta(in, zeta));
    WeylElement p = p_zeta(in, zeta);
    int eps;
    if (img == p)
      eps = 0;
    else if (img == p.scaled(Rational(-1)))
      eps = 1;
    else
      return act;
    std::vector<int> row(N);
    for (int k = 0; k < N; ++k) row[k] = static_cast<int>(std::abs(zeta[k]) % 2);
    rows.push_back(row);
    rhs.push_back(eps);
  }
  std::vector<int> tau;
  if (!solve_gf2(rows, rhs, N, &tau)) return act;
  for (int k = 0; k < N; ++k) act.torus_sign[k] = tau[k] ? -1 : 1;
  act.lift_found = true;
  return act;
}

namespace {

// Classical images on C[x, y] (variables x_1..x_N, y_1..y_N): signed monomial substitution.
struct ClassicalMap {
  std::vector<int> target;  // variable v -> target variable
  std::vector<int> sign;
  bool operator<(const ClassicalMap& o) const {
    return target != o.target ? target < o.target : sign < o.sign;
  }
  bool operator==(const ClassicalMap& o) const { return target == o.target && sign == o.sign; }
};

ClassicalMap classical_map(const WeylAction& act, int N) {
  ClassicalMap m;
  m.target.assign(2 * N, 0);
  m.sign.assign(2 * N, 1);
  for (int k = 0; k < N; ++k) {
    int t = act.sigma.perm[k];
    int s = act.sigma.signs[t];
    int tk = act.torus_sign[k];
    if (s == 1) {
      m.target[k] = t;
      m.sign[k] = tk;
      m.target[N + k] = N + t;
      m.sign[N + k] = tk;
    } else {
      m.target[k] = N + t;
      m.sign[k] = -tk;
      m.target[N + k] = t;
      m.sign[N + k] = tk;
    }
  }
  return m;
}

ClassicalMap compose(const ClassicalMap& a, const ClassicalMap& b) {  // a after b
  ClassicalMap r;
  size_t n = a.target.size();
  r.target.resize(n);
  r.sign.resize(n);
  for (size_t v = 0; v < n; ++v) {
    r.target[v] = a.target[b.target[v]];
    r.sign[v] = b.sign[v] * a.sign[b.target[v]];
  }
  return r;
}

std::pair<std::vector<int>, int> apply_map(const ClassicalMap& m, const std::vector<int>& e) {
  std::vector<int> out(e.size(), 0);
  int sign = 1;
  for (size_t v = 0; v < e.size(); ++v) {
    if (!e[v]) continue;
    out[m.target[v]] += e[v];
    if (m.sign[v] == -1 && e[v] % 2) sign = -sign;
  }
  return {out, sign};
}

MPoly classical_h(const HypertoricInput& in, int k) {
  int N = in.N, nv = 2 * N;
  auto xy = [&](int j) { return MPoly::variable(nv, j) * MPoly::variable(nv, N + j); };
  MPoly h = xy(k);
  RatVec beta = euler_beta(in, k);
  for (int i = 0; i < in.M; ++i) {
    if (beta[i] == 0) continue;
    MPoly mu(nv);
    for (int j = 0; j < N; ++j)
      if (in.delta[i][j]) mu += xy(j).scaled(Rational(in.delta[i][j]));
    h -= mu.scaled(beta[i]);
  }
  return h;
}

MPoly classical_p(const HypertoricInput& in, const IntVec& zeta) {
  int N = in.N;
  std::vector<int> e(2 * N, 0);
  for (int k = 0; k < N; ++k) {
    if (zeta[k] > 0) e[k] = static_cast<int>(zeta[k]);
    if (zeta[k] < 0) e[N + k] = static_cast<int>(-zeta[k]);
  }
  MPoly p(2 * N);
  p.add(e, Rational(1));
  return p;
}

std::vector<std::vector<int>> monomials_of_degree(int nv, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(nv, 0);
  std::function<void(int, int)> rec = [&](int v, int rem) {
    if (v == nv - 1) {
      e[v] = rem;
      out.push_back(e);
      e[v] = 0;
      return;
    }
    for (int t = rem; t >= 0; --t) {
      e[v] = t;
      rec(v + 1, rem - t);
    }
    e[v] = 0;
  };
  if (nv > 0) rec(0, d);
  return out;
}

}  // namespace

InvariantsReport weyl_invariants_check(const HypertoricInput& in, int max_weight2, int zeta_window) {
  InvariantsReport rep;
  int N = in.N, M = in.M;
  auto group = weyl_group(in);
  rep.group_order = static_cast<int>(group.size());
  for (const auto& g : group) rep.actions.push_back(weyl_action(in, g));

  std::vector<WeylElement> gens;
  std::vector<std::string> names;
  for (const auto& z : lambda0_window(in, zeta_window)) {
    gens.push_back(p_zeta(in, z));
    std::ostringstream os;
    os << "P(";
    for (int k = 0; k < N; ++k) os << (k ? "," : "") << z[k];
    os << ")";
    names.push_back(os.str());
  }
  for (int k = 0; k < N; ++k) {
    gens.push_back(h_k(in, k));
    names.push_back("H" + std::to_string(k + 1));
  }
  for (const auto& act : rep.actions) {
    if (!act.lift_found) {
      rep.lifts_found = false;
      rep.generators_fixed = false;
      rep.failures.push_back("no torus sign lift for a group element");
      continue;
    }
    for (size_t g = 0; g < gens.size(); ++g) {
      ReducedElement before = reduce_mod_ideal(in, gens[g]);
      ReducedElement after = reduce_mod_ideal(in, apply_action(act, gens[g]));
      if (!(before == after)) {
        rep.generators_fixed = false;
        rep.failures.push_back(names[g] + " moved to " + after.str());
      }
    }
  }

  // Classical comparison in C[x, y]^G, graded by polynomial degree.
  int nv = 2 * N;
  std::vector<std::pair<MPoly, int>> cgens;
  for (int k = 0; k < N; ++k) cgens.push_back({classical_h(in, k), 2});
  for (const auto& z : lambda0_window(in, std::max(zeta_window, max_weight2))) {
    int deg = 0;
    for (long v : z) deg += static_cast<int>(std::abs(v));
    if (deg <= max_weight2) cgens.push_back({classical_p(in, z), deg});
  }
  std::map<std::vector<int>, int> index;
  auto coords = [&](const MPoly& p) {
    std::map<int, Rational> m;
    for (const auto& [e, c] : p.terms) {
      auto it = index.find(e);
      int id = it == index.end() ? index.emplace(e, static_cast<int>(index.size())).first->second : it->second;
      m[id] += c;
    }
    return sparse_from_map(m);
  };
  for (int d = 0; d <= max_weight2; ++d) {
    Echelon span;
    std::function<void(size_t, int, MPoly)> rec = [&](size_t g, int rem, MPoly acc) {
      if (rem == 0) {
        span.insert(coords(acc));
        return;
      }
      if (g == cgens.size()) return;
      rec(g + 1, rem, acc);
      int deg = cgens[g].second;
      MPoly cur = acc;
      for (int used = deg; used <= rem; used += deg) {
        cur = cur * cgens[g].first;
        rec(g + 1, rem - used, cur);
      }
    };
    rec(0, d, MPoly::constant(nv, Rational(1)));
    rep.generated_dims[d] = span.rank();
  }

  // Group closure of the classical maps, then Reynolds images of G-invariant monomials.
  std::set<ClassicalMap> closure;
  std::vector<ClassicalMap> frontier;
  for (const auto& act : rep.actions) {
    if (!act.lift_found) continue;
    ClassicalMap m = classical_map(act, N);
    if (closure.insert(m).second) frontier.push_back(m);
  }
  std::vector<ClassicalMap> seeds(closure.begin(), closure.end());
  while (!frontier.empty()) {
    ClassicalMap m = frontier.back();
    frontier.pop_back();
    for (const auto& s : seeds) {
      ClassicalMap c = compose(s, m);
      if (closure.insert(c).second) frontier.push_back(c);
    }
  }
  for (int d = 0; d <= max_weight2; ++d) {
    Echelon span;
    for (const auto& e : monomials_of_degree(nv, d)) {
      IntVec z(N);
      for (int k = 0; k < N; ++k) z[k] = e[k] - e[N + k];
      if (!in_lambda0(in, z)) continue;
      MPoly avg(nv);
      for (const auto& g : closure) {
        auto [img, s] = apply_map(g, e);
        avg.add(img, Rational(s));
      }
      if (closure.empty()) avg.add(e, Rational(1));
      span.insert(coords(avg));
    }
    rep.invariant_dims[d] = span.rank();
  }
  (void)M;
  return rep;
}

}  // namespace htva
