#include <htva/hypertoric.hpp>
#include <htva/linalg.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace htva {

HypertoricInput HypertoricInput::make(IntMat delta, RatVec stability) {
  HypertoricInput in;
  in.M = static_cast<int>(delta.size());
  if (in.M == 0) throw InputError("delta must have at least one row");
  in.N = static_cast<int>(delta[0].size());
  for (const auto& row : delta)
    if (static_cast<int>(row.size()) != in.N) throw InputError("delta rows have different lengths");
  if (static_cast<int>(stability.size()) != in.M)
    throw InputError("stability has length " + std::to_string(stability.size()) + ", expected " + std::to_string(in.M));
  if (in.M >= in.N) throw InputError("need M < N, got M=" + std::to_string(in.M) + " N=" + std::to_string(in.N));
  in.delta = std::move(delta);
  in.stability = std::move(stability);
  return in;
}

IntVec HypertoricInput::column(int j) const {
  IntVec c(M);
  for (int i = 0; i < M; ++i) c[i] = delta[i][j];
  return c;
}

bool Chart::in_J1(int site) const { return std::find(J1.begin(), J1.end(), site) != J1.end(); }
bool Chart::in_J2(int site) const { return std::find(J2.begin(), J2.end(), site) != J2.end(); }

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int j = start; j < n; ++j) {
      cur.push_back(j);
      rec(j + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

namespace {

IntMat minor_matrix(const HypertoricInput& in, const std::vector<int>& J) {
  IntMat m(in.M, IntVec(J.size()));
  for (int i = 0; i < in.M; ++i)
    for (size_t k = 0; k < J.size(); ++k) m[i][k] = in.delta[i][J[k]];
  return m;
}

RatMat columns_as_rows(const HypertoricInput& in, const std::vector<int>& cols) {
  RatMat r;
  for (int j : cols) {
    RatVec v;
    for (int i = 0; i < in.M; ++i) v.emplace_back(in.delta[i][j]);
    r.push_back(v);
  }
  return r;
}

}  // namespace

ValidationReport validate(const HypertoricInput& in) {
  ValidationReport rep;
  rep.rank_ok = rank(to_rational(in.delta)) == in.M;
  Integer g = 0;
  bool uni = true;
  for (const auto& J : subsets(in.N, in.M)) {
    Integer d = determinant(minor_matrix(in, J));
    g = gcd(g, d);
    if (abs(d) > 1) uni = false;
  }
  rep.gcd_ok = g == 1;
  rep.unimodular = uni && rep.rank_ok;
  return rep;
}

void require_unimodular(const HypertoricInput& in) {
  ValidationReport r = validate(in);
  if (!r.rank_ok) throw DomainError("delta does not have rank M");
  if (!r.unimodular) {
    for (const auto& J : subsets(in.N, in.M)) {
      Integer d = determinant(minor_matrix(in, J));
      if (abs(d) > 1) {
        std::string s;
        for (int j : J) s += (s.empty() ? "" : ",") + std::to_string(j + 1);
        throw DomainError("delta is not unimodular: minor J={" + s + "} has determinant " + d.get_str());
      }
    }
  }
}

IntMat gram_matrix(const HypertoricInput& in) {
  IntMat g(in.M, IntVec(in.M, 0));
  for (int i = 0; i < in.M; ++i)
    for (int j = 0; j < in.M; ++j)
      for (int k = 0; k < in.N; ++k) g[i][j] += in.delta[i][k] * in.delta[j][k];
  return g;
}

std::vector<Wall> git_walls(const HypertoricInput& in) {
  std::vector<Wall> walls;
  std::set<std::vector<std::string>> seen;
  for (unsigned mask = 0; mask < (1u << in.N); ++mask) {
    std::vector<int> cols;
    for (int j = 0; j < in.N; ++j)
      if (mask & (1u << j)) cols.push_back(j);
    RatMat rows = columns_as_rows(in, cols);
    int r = rows.empty() ? 0 : rank(rows);
    if (r != in.M - 1) continue;
    std::vector<int> piv;
    RatMat basis = rows.empty() ? RatMat{} : rref(rows, &piv);
    basis.resize(r);
    std::vector<std::string> key;
    for (const auto& row : basis)
      for (const auto& q : row) key.push_back(q.get_str());
    if (!seen.insert(key).second) continue;
    Wall w;
    w.basis = basis;
    for (int j = 0; j < in.N; ++j) {
      RatMat ext = basis;
      ext.push_back(columns_as_rows(in, {j})[0]);
      if (rank(ext) == r) w.spanning.push_back(j);
    }
    // Normal: kernel of the basis rows (one-dimensional).
    IntMat b;
    for (const auto& row : basis) {
      Integer l = 1;
      for (const auto& q : row) l = lcm(l, q.get_den());
      IntVec iv;
      for (const auto& q : row) iv.push_back(Rational(q * l).get_num().get_si());
      b.push_back(iv);
    }
    if (b.empty()) {
      w.normal = IntVec(in.M, 0);
      if (in.M == 1) w.normal[0] = 1;
    } else {
      IntMat k = integer_kernel(b);
      w.normal = k.empty() ? IntVec(in.M, 0) : k[0];
    }
    walls.push_back(std::move(w));
  }
  std::sort(walls.begin(), walls.end(), [](const Wall& a, const Wall& b) { return a.spanning < b.spanning; });
  return walls;
}

bool is_generic(const HypertoricInput& in) {
  bool zero = std::all_of(in.stability.begin(), in.stability.end(), [](const Rational& q) { return q == 0; });
  if (zero) return false;
  for (const auto& w : git_walls(in)) {
    Rational s = 0;
    for (int i = 0; i < in.M; ++i) s += w.normal[i] * in.stability[i];
    if (s == 0) return false;
  }
  return true;
}

bool semistable(const HypertoricInput& in, const std::vector<int>& J1, const std::vector<int>& J2) {
  // Vertex enumeration: a point of a polyhedral cone is a nonnegative combination
  // of a linearly independent subset of its generators.
  std::vector<RatVec> gens;
  for (int j : J1) gens.push_back(columns_as_rows(in, {j})[0]);
  for (int j : J2) {
    RatVec v = columns_as_rows(in, {j})[0];
    for (auto& q : v) q = -q;
    gens.push_back(v);
  }
  bool zero = std::all_of(in.stability.begin(), in.stability.end(), [](const Rational& q) { return q == 0; });
  if (zero) return true;
  int n = static_cast<int>(gens.size());
  for (int k = 1; k <= std::min(n, in.M); ++k) {
    for (const auto& S : subsets(n, k)) {
      RatMat a(in.M, RatVec(k));
      for (int i = 0; i < in.M; ++i)
        for (int c = 0; c < k; ++c) a[i][c] = gens[S[c]][i];
      if (rank(a) != k) continue;
      auto x = solve(a, in.stability);
      if (!x) continue;
      if (std::all_of(x->begin(), x->end(), [](const Rational& q) { return q >= 0; })) return true;
    }
  }
  return false;
}

Chart chart_for(const HypertoricInput& in, const std::vector<int>& J) {
  IntMat dj = minor_matrix(in, J);
  Integer det = determinant(dj);
  if (abs(det) != 1) {
    std::string s;
    for (int j : J) s += (s.empty() ? "" : ",") + std::to_string(j + 1);
    throw DomainError("chart J={" + s + "} fails unimodularity (minor " + det.get_str() + ")");
  }
  Chart c;
  c.J = J;
  auto alpha = solve(to_rational(dj), in.stability);
  c.alpha = *alpha;
  for (size_t k = 0; k < J.size(); ++k) {
    if (c.alpha[k] == 0) {
      for (const auto& w : git_walls(in)) {
        Rational s = 0;
        for (int i = 0; i < in.M; ++i) s += w.normal[i] * in.stability[i];
        if (s == 0) {
          std::string sp;
          for (int j : w.spanning) sp += (sp.empty() ? "" : ",") + std::to_string(j + 1);
          throw DomainError("stability parameter is not generic: lies on the wall spanned by columns {" + sp + "}");
        }
      }
      throw DomainError("stability parameter is not generic");
    }
    (c.alpha[k] > 0 ? c.J1 : c.J2).push_back(J[k]);
  }
  // lambda * D_J^T = I, i.e. lambda = (D_J^T)^{-1}.
  RatMat djt(in.M, RatVec(in.M));
  for (int i = 0; i < in.M; ++i)
    for (int k = 0; k < in.M; ++k) djt[i][k] = dj[k][i];
  RatMat inv = *inverse(djt);
  c.lambda.assign(in.M, IntVec(in.M));
  for (int i = 0; i < in.M; ++i)
    for (int k = 0; k < in.M; ++k) c.lambda[i][k] = inv[i][k].get_num().get_si();
  c.t_exponents.assign(in.M, IntVec(in.M));
  for (int i = 0; i < in.M; ++i)
    for (int k = 0; k < in.M; ++k) c.t_exponents[i][k] = c.alpha[k] > 0 ? c.lambda[i][k] : -c.lambda[i][k];
  for (int j = 0; j < in.N; ++j) {
    if (std::find(J.begin(), J.end(), j) != J.end()) continue;
    c.free_sites.push_back(j);
    IntVec p(in.M);
    for (int i = 0; i < in.M; ++i) p[i] = -in.delta[i][j];
    c.astar_t_power.push_back(p);
  }
  return c;
}

std::vector<Chart> enumerate_charts(const HypertoricInput& in) {
  std::vector<Chart> out;
  for (const auto& J : subsets(in.N, in.M)) {
    Integer d = determinant(minor_matrix(in, J));
    if (d == 0) continue;
    out.push_back(chart_for(in, J));
  }
  return out;
}

IntMat lattice_lambda0(const HypertoricInput& in) { return integer_kernel(in.delta); }

RatVec euler_beta(const HypertoricInput& in, int k) {
  if (k < 0 || k >= in.N) throw InputError("site index out of range");
  IntMat g = gram_matrix(in);
  auto ginv = inverse(to_rational(g));
  if (!ginv) throw DomainError("Gram matrix is singular");
  RatVec beta(in.M, Rational(0));
  for (int i = 0; i < in.M; ++i)
    for (int l = 0; l < in.M; ++l) beta[i] += (*ginv)[i][l] * in.delta[l][k];
  return beta;
}

IntVec SignedPermutation::apply(const IntVec& v) const {
  IntVec r(v.size());
  for (size_t k = 0; k < v.size(); ++k) r[perm[k]] = signs[perm[k]] * v[k];
  return r;
}

SignedPermutation SignedPermutation::compose(const SignedPermutation& o) const {
  size_t n = perm.size();
  SignedPermutation r;
  r.perm.resize(n);
  r.signs.resize(n);
  for (size_t k = 0; k < n; ++k) {
    r.perm[k] = perm[o.perm[k]];
    r.signs[r.perm[k]] = signs[r.perm[k]] * o.signs[o.perm[k]];
  }
  return r;
}

SignedPermutation SignedPermutation::inverse() const {
  size_t n = perm.size();
  SignedPermutation r;
  r.perm.resize(n);
  r.signs.resize(n);
  for (size_t k = 0; k < n; ++k) {
    r.perm[perm[k]] = static_cast<int>(k);
    r.signs[k] = signs[perm[k]];
  }
  return r;
}

std::vector<SignedPermutation> weyl_group(const HypertoricInput& in) {
  if (in.N > kWeylEnumerationBound)
    throw DomainError("N=" + std::to_string(in.N) + " is too large for signed-permutation enumeration (bound " +
                      std::to_string(kWeylEnumerationBound) + ")");
  IntMat basis = lattice_lambda0(in);
  int n = in.N;
  std::vector<SignedPermutation> out;
  // Build the inverse map target k <- source src[k] with sign s[k]; the
  // condition s_k * b_{src_k} = b_k is checked as soon as k is assigned.
  std::vector<int> src(n, -1), sg(n, 1);
  std::vector<bool> used(n, false);
  std::function<void(int)> rec = [&](int k) {
    if (k == n) {
      SignedPermutation p;
      p.perm.resize(n);
      p.signs = sg;
      for (int t = 0; t < n; ++t) p.perm[src[t]] = t;
      out.push_back(p);
      return;
    }
    for (int s = 0; s < n; ++s) {
      if (used[s]) continue;
      for (int sign : {1, -1}) {
        bool ok = true;
        for (const auto& b : basis)
          if (sign * b[s] != b[k]) {
            ok = false;
            break;
          }
        if (!ok) continue;
        used[s] = true;
        src[k] = s;
        sg[k] = sign;
        rec(k + 1);
        used[s] = false;
      }
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace htva
