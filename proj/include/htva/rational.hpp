#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace htva {

using Rational = mpq_class;
using Integer = mpz_class;
using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;
using IntVec = std::vector<long>;
using IntMat = std::vector<IntVec>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: bad file, bad expression, out-of-range index.
class InputError : public Error {
 public:
  using Error::Error;
};

// A precondition of a mathematical operation does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Canonicalized num/den.
inline Rational ratio(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

// Generalized binomial coefficient top*(top-1)*...*(top-k+1)/k!.
Rational binomial(const Rational& top, long k);
Integer binomial(long top, long k);
Integer factorial(long n);
// top*(top-1)*...*(top-k+1)
Integer falling(long top, long k);
// r*(r+1)*...*(r+k-1)
Integer rising(long r, long k);

}  // namespace htva
