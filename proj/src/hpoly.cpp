#include <htva/hpoly.hpp>

#include <sstream>

namespace htva {

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ') t.push_back(ch);
  if (t.empty()) throw InputError("empty rational");
  size_t slash = t.find('/');
  auto check_int = [&](const std::string& s, bool allow_sign) {
    size_t i = 0;
    if (allow_sign && i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) throw InputError("malformed rational \"" + text + "\"");
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') throw InputError("malformed rational \"" + text + "\"");
  };
  if (slash == std::string::npos) {
    check_int(t, true);
    return Rational(Integer(t[0] == '+' ? t.substr(1) : t));
  }
  std::string num = t.substr(0, slash), den = t.substr(slash + 1);
  check_int(num, true);
  check_int(den, false);
  Integer d(den);
  if (d == 0) throw InputError("zero denominator in \"" + text + "\"");
  Rational q(Integer(num[0] == '+' ? num.substr(1) : num), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational binomial(const Rational& top, long k) {
  if (k < 0) return 0;
  Rational r = 1;
  for (long i = 0; i < k; ++i) r *= (top - i);
  r /= Rational(factorial(k));
  return r;
}

Integer binomial(long top, long k) {
  if (k < 0) return 0;
  Integer r = falling(top, k);
  return r / factorial(k);
}

Integer factorial(long n) {
  Integer r = 1;
  for (long i = 2; i <= n; ++i) r *= i;
  return r;
}

Integer falling(long top, long k) {
  Integer r = 1;
  for (long i = 0; i < k; ++i) r *= (top - i);
  return r;
}

Integer rising(long r, long k) {
  Integer v = 1;
  for (long i = 0; i < k; ++i) v *= (r + i);
  return v;
}

HPoly::HPoly(const Rational& c) {
  if (c != 0) coeffs_.push_back(c);
}

HPoly HPoly::monomial(const Rational& c, int degree) {
  HPoly p;
  if (c != 0) {
    p.coeffs_.assign(degree + 1, Rational(0));
    p.coeffs_[degree] = c;
  }
  return p;
}

int HPoly::low_degree() const {
  for (size_t k = 0; k < coeffs_.size(); ++k)
    if (coeffs_[k] != 0) return static_cast<int>(k);
  return -1;
}

Rational HPoly::operator[](int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0;
  return coeffs_[k];
}

void HPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

HPoly& HPoly::operator+=(const HPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

HPoly& HPoly::operator-=(const HPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

HPoly& HPoly::operator*=(const HPoly& o) {
  if (is_zero() || o.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<Rational> r(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  coeffs_ = std::move(r);
  trim();
  return *this;
}

HPoly& HPoly::operator*=(const Rational& c) {
  if (c == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& x : coeffs_) x *= c;
  return *this;
}

HPoly HPoly::operator-() const {
  HPoly r = *this;
  for (auto& x : r.coeffs_) x = -x;
  return r;
}

HPoly HPoly::shifted(int k) const {
  if (is_zero()) return {};
  HPoly r;
  if (k >= 0) {
    r.coeffs_.assign(k, Rational(0));
    r.coeffs_.insert(r.coeffs_.end(), coeffs_.begin(), coeffs_.end());
    return r;
  }
  int drop = -k;
  for (int i = 0; i < drop && i < static_cast<int>(coeffs_.size()); ++i)
    if (coeffs_[i] != 0) throw DomainError("coefficient " + str() + " is not divisible by h^" + std::to_string(drop));
  if (drop >= static_cast<int>(coeffs_.size())) return {};
  r.coeffs_.assign(coeffs_.begin() + drop, coeffs_.end());
  return r;
}

Rational HPoly::at_one() const {
  Rational s = 0;
  for (const auto& x : coeffs_) s += x;
  return s;
}

std::string HPoly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    if (!first) os << (coeffs_[k] > 0 ? " + " : " - ");
    else if (coeffs_[k] < 0) os << "-";
    Rational a = abs(coeffs_[k]);
    if (k == 0 || a != 1) os << a.get_str();
    if (k > 0) os << (k == 0 || a != 1 ? " " : "") << "h" << (k > 1 ? "^" + std::to_string(k) : "");
    first = false;
  }
  return os.str();
}

HPoly operator+(HPoly a, const HPoly& b) { return a += b; }
HPoly operator-(HPoly a, const HPoly& b) { return a -= b; }
HPoly operator*(HPoly a, const HPoly& b) { return a *= b; }
HPoly operator*(HPoly a, const Rational& c) { return a *= c; }
HPoly operator*(const Rational& c, HPoly a) { return a *= c; }

}  // namespace htva
