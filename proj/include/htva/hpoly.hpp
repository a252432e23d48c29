#pragma once

#include <htva/rational.hpp>

#include <string>
#include <vector>

namespace htva {

// Polynomial in hbar with rational coefficients, trailing zeros trimmed.
class HPoly {
 public:
  HPoly() = default;
  HPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  HPoly(long c) : HPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static HPoly monomial(const Rational& c, int degree);

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  int low_degree() const;
  Rational operator[](int k) const;
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  HPoly& operator+=(const HPoly& o);
  HPoly& operator-=(const HPoly& o);
  HPoly& operator*=(const HPoly& o);
  HPoly& operator*=(const Rational& c);
  HPoly operator-() const;

  // Multiply by hbar^k; negative k divides and throws DomainError if not exact.
  HPoly shifted(int k) const;
  Rational at_one() const;

  bool operator==(const HPoly& o) const { return coeffs_ == o.coeffs_; }
  bool operator!=(const HPoly& o) const { return !(*this == o); }

  std::string str() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

HPoly operator+(HPoly a, const HPoly& b);
HPoly operator-(HPoly a, const HPoly& b);
HPoly operator*(HPoly a, const HPoly& b);
HPoly operator*(HPoly a, const Rational& c);
HPoly operator*(const Rational& c, HPoly a);

}  // namespace htva
