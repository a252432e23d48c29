#include <htva/linalg.hpp>

#include <algorithm>
#include <numeric>

namespace htva {

SparseVec sparse_from_map(const std::map<int, Rational>& m) {
  SparseVec v;
  for (const auto& [i, q] : m)
    if (q != 0) v.emplace_back(i, q);
  return v;
}

namespace {

SparseIntVec cleared(const SparseVec& v, Integer* den) {
  Integer l = 1;
  for (const auto& e : v) l = lcm(l, e.second.get_den());
  SparseIntVec r;
  r.reserve(v.size());
  for (const auto& e : v) r.emplace_back(e.first, e.second.get_num() * (l / e.second.get_den()));
  *den = l;
  return r;
}

SparseIntVec primitive(const SparseVec& v) {
  Integer l = 1;
  for (const auto& e : v) l = lcm(l, e.second.get_den());
  SparseIntVec r;
  r.reserve(v.size());
  Integer g = 0;
  for (const auto& e : v) {
    Integer x = e.second.get_num() * (l / e.second.get_den());
    g = gcd(g, x);
    r.emplace_back(e.first, x);
  }
  if (g > 1)
    for (auto& e : r) e.second /= g;
  return r;
}

// a <- p*a - q*b
SparseIntVec combine(const SparseIntVec& a, const Integer& p, const SparseIntVec& b, const Integer& q) {
  SparseIntVec r;
  r.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.emplace_back(a[i].first, p * a[i].second);
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.emplace_back(b[j].first, -q * b[j].second);
      ++j;
    } else {
      Integer x = p * a[i].second - q * b[j].second;
      if (x != 0) r.emplace_back(a[i].first, x);
      ++i;
      ++j;
    }
  }
  return r;
}

Integer content(const SparseIntVec& v) {
  Integer g = 0;
  for (const auto& e : v) g = gcd(g, e.second);
  return g;
}

void divide(SparseIntVec& v, const Integer& g) {
  if (g <= 1) return;
  for (auto& e : v) e.second /= g;
}

SparseVec to_rational(const SparseIntVec& v) {
  SparseVec r;
  r.reserve(v.size());
  for (const auto& e : v) r.emplace_back(e.first, Rational(e.second));
  return r;
}

}  // namespace

void Echelon::eliminate(SparseIntVec& v, SparseIntVec* tag) const {
  size_t pos = 0;
  while (pos < v.size()) {
    auto it = rows_.find(v[pos].first);
    if (it == rows_.end()) {
      ++pos;
      continue;
    }
    const Integer& lead = it->second.vec.front().second;
    Integer a = v[pos].second;
    Integer g = gcd(lead, a);
    Integer p = lead / g, q = a / g;
    size_t keep = pos;
    SparseIntVec head(v.begin(), v.begin() + static_cast<long>(keep));
    SparseIntVec tail(v.begin() + static_cast<long>(keep), v.end());
    SparseIntVec nt = combine(tail, p, it->second.vec, q);
    for (auto& e : head) e.second *= p;
    head.insert(head.end(), nt.begin(), nt.end());
    v = std::move(head);
    if (tag) *tag = combine(*tag, p, it->second.tag, q);
    Integer c = content(v);
    if (tag) c = gcd(c, content(*tag));
    divide(v, c);
    if (tag) divide(*tag, c);
  }
}

bool Echelon::insert(const SparseVec& v, int tag) {
  SparseIntVec w, t;
  if (track_) {
    Integer l;
    w = cleared(v, &l);
    t.emplace_back(tag, l);
  } else {
    w = primitive(v);
  }
  eliminate(w, track_ ? &t : nullptr);
  if (w.empty()) {
    if (track_ && !t.empty()) relations_.push_back(to_rational(t));
    return false;
  }
  if (w.front().second < 0) {
    for (auto& e : w) e.second = -e.second;
    for (auto& e : t) e.second = -e.second;
  }
  int lead = w.front().first;
  rows_.emplace(lead, Row{std::move(w), std::move(t)});
  return true;
}

SparseIntVec Echelon::reduce(const SparseVec& v) const {
  SparseIntVec w = primitive(v);
  eliminate(w, nullptr);
  return w;
}

bool Echelon::contains(const SparseVec& v) const { return reduce(v).empty(); }

int rank(const SparseMatrix& a) {
  Echelon e;
  for (const auto& c : a.columns) e.insert(c);
  return e.rank();
}

std::vector<SparseVec> kernel(const SparseMatrix& a) {
  Echelon e(true);
  for (int j = 0; j < a.cols; ++j) e.insert(a.columns[j], j);
  return e.relations();
}

RatMat rref(RatMat a, std::vector<int>* pivots) {
  if (pivots) pivots->clear();
  size_t rows = a.size();
  if (rows == 0) return a;
  size_t cols = a[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Rational inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (size_t k = 0; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    if (pivots) pivots->push_back(static_cast<int>(c));
    ++r;
  }
  return a;
}

int rank(const RatMat& a) {
  std::vector<int> piv;
  rref(a, &piv);
  return static_cast<int>(piv.size());
}

std::optional<RatMat> inverse(const RatMat& a) {
  size_t n = a.size();
  RatMat aug(n, RatVec(2 * n, Rational(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  std::vector<int> piv;
  RatMat r = rref(aug, &piv);
  if (piv.size() < n || piv[n - 1] >= static_cast<int>(n)) return std::nullopt;
  RatMat inv(n, RatVec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv[i][j] = r[i][n + j];
  return inv;
}

std::optional<RatVec> solve(const RatMat& a, const RatVec& b) {
  size_t rows = a.size();
  size_t cols = rows ? a[0].size() : 0;
  RatMat aug(rows, RatVec(cols + 1));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }
  std::vector<int> piv;
  RatMat r = rref(aug, &piv);
  RatVec x(cols, Rational(0));
  for (size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] == static_cast<int>(cols)) return std::nullopt;
    x[piv[i]] = r[i][cols];
  }
  return x;
}

Integer determinant(const IntMat& a) {
  size_t n = a.size();
  if (n == 0) return 1;
  // Bareiss fraction-free elimination.
  std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
  Integer prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

RatMat to_rational(const IntMat& a) {
  RatMat r(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (long x : a[i]) r[i].emplace_back(x);
  return r;
}

IntMat integer_kernel(const IntMat& a) {
  size_t rows = a.size();
  size_t n = rows ? a[0].size() : 0;
  // Work on columns of a together with the unimodular transform u (a*u).
  std::vector<std::vector<Integer>> m(rows, std::vector<Integer>(n));
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
  std::vector<std::vector<Integer>> u(n, std::vector<Integer>(n, Integer(0)));
  for (size_t j = 0; j < n; ++j) u[j][j] = 1;
  auto col_op = [&](size_t dst, size_t src, const Integer& f) {  // col dst -= f * col src
    for (size_t i = 0; i < rows; ++i) m[i][dst] -= f * m[i][src];
    for (size_t i = 0; i < n; ++i) u[i][dst] -= f * u[i][src];
  };
  auto col_swap = [&](size_t x, size_t y) {
    for (size_t i = 0; i < rows; ++i) std::swap(m[i][x], m[i][y]);
    for (size_t i = 0; i < n; ++i) std::swap(u[i][x], u[i][y]);
  };
  size_t piv = 0;
  for (size_t i = 0; i < rows && piv < n; ++i) {
    // Euclid across columns piv..n-1 in row i.
    while (true) {
      size_t best = n;
      for (size_t j = piv; j < n; ++j)
        if (m[i][j] != 0 && (best == n || abs(m[i][j]) < abs(m[i][best]))) best = j;
      if (best == n) break;
      col_swap(piv, best);
      bool done = true;
      for (size_t j = piv + 1; j < n; ++j) {
        if (m[i][j] == 0) continue;
        Integer f = m[i][j] / m[i][piv];
        col_op(j, piv, f);
        if (m[i][j] != 0) done = false;
      }
      if (done) break;
    }
    if (m[i][piv] != 0) ++piv;
  }
  IntMat ker;
  for (size_t j = piv; j < n; ++j) {
    IntVec v(n);
    for (size_t i = 0; i < n; ++i) v[i] = u[i][j].get_si();
    // Normalize: first nonzero entry positive.
    for (long x : v) {
      if (x == 0) continue;
      if (x < 0)
        for (auto& y : v) y = -y;
      break;
    }
    ker.push_back(v);
  }
  return ker;
}

}  // namespace htva
