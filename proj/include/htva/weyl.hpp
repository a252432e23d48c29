#pragma once

#include <htva/hypertoric.hpp>

#include <map>
#include <string>
#include <vector>

namespace htva {

// Commutative polynomial with rational coefficients in a fixed number of variables.
struct MPoly {
  int nvars = 0;
  std::map<std::vector<int>, Rational> terms;

  MPoly() = default;
  explicit MPoly(int n) : nvars(n) {}
  static MPoly constant(int n, const Rational& c);
  static MPoly variable(int n, int i);

  bool is_zero() const { return terms.empty(); }
  void add(const std::vector<int>& e, const Rational& c);
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly operator*(const MPoly& o) const;
  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly scaled(const Rational& c) const;
  MPoly pow(int k) const;
  // Substitute variable i by images[i].
  MPoly substitute(const std::vector<MPoly>& images) const;
  int total_degree() const;
  bool operator==(const MPoly& o) const { return terms == o.terms; }
  std::string str(const std::vector<std::string>& names) const;
};

// Weyl algebra in x_1..x_N, d_1..d_N tensored with polynomials in c_1..c_M.
// Key layout: x exponents, then d exponents, then c exponents; x left of d.
struct WeylElement {
  int N = 0;
  int M = 0;
  std::map<std::vector<int>, Rational> terms;

  WeylElement() = default;
  WeylElement(int n, int m) : N(n), M(m) {}
  static WeylElement scalar(int n, int m, const Rational& c);
  static WeylElement x(int n, int m, int k);
  static WeylElement d(int n, int m, int k);
  static WeylElement c(int n, int m, int i);

  bool is_zero() const { return terms.empty(); }
  void add(const std::vector<int>& key, const Rational& c);
  WeylElement& operator+=(const WeylElement& o);
  WeylElement& operator-=(const WeylElement& o);
  WeylElement operator+(const WeylElement& o) const;
  WeylElement operator-(const WeylElement& o) const;
  WeylElement scaled(const Rational& c) const;
  bool operator==(const WeylElement& o) const { return terms == o.terms; }
  std::string str() const;
};

WeylElement weyl_mul(const WeylElement& a, const WeylElement& b);
WeylElement weyl_commutator(const WeylElement& a, const WeylElement& b);
// c_i -> c_i + shift_i.
WeylElement shift_c(const WeylElement& a, const RatVec& shift);

// Sum over zeta of p_zeta(H, c) P_zeta; polynomials in N + M variables
// (H_1..H_N then c_1..c_M), pivot H variables never occur.
struct ReducedElement {
  int N = 0;
  int M = 0;
  std::map<IntVec, MPoly> components;

  bool is_zero() const { return components.empty(); }
  void add(const IntVec& zeta, const MPoly& p);
  ReducedElement operator+(const ReducedElement& o) const;
  ReducedElement operator-(const ReducedElement& o) const;
  bool operator==(const ReducedElement& o) const { return components == o.components; }
  std::string str() const;
};

// First M-subset of sites (lexicographic) with unit Delta-minor.
std::vector<int> pivot_sites(const HypertoricInput& in);
ReducedElement reduce_mod_ideal(const HypertoricInput& in, const WeylElement& a);
// Weyl element p(H, c) P_zeta realizing a reduced element.
WeylElement lift(const HypertoricInput& in, const ReducedElement& r);

WeylElement p_zeta(const HypertoricInput& in, const IntVec& zeta);
WeylElement h_k(const HypertoricInput& in, int k);

// Lift of a signed permutation to the quantized algebra: x_k -> t_k x_k' for
// sign +1 and x_k -> -t_k d_k', d_k -> t_k x_k' for sign -1, with c relabelled
// affinely so that the comoment ideal is preserved.
struct WeylAction {
  SignedPermutation sigma;
  std::vector<int> torus_sign;  // t_k
  IntMat c_linear;  // sigma(c_i) = sum_j c_linear[i][j] c_j + c_shift[i]
  RatVec c_shift;
  bool lift_found = false;
};

WeylAction weyl_action(const HypertoricInput& in, const SignedPermutation& sigma);
WeylElement apply_action(const WeylAction& act, const WeylElement& a);

struct InvariantsReport {
  int group_order = 0;
  std::vector<WeylAction> actions;
  bool lifts_found = true;
  bool generators_fixed = true;
  std::vector<std::string> failures;
  // Doubled degree d -> dimension, for d <= 2 * max_weight.
  std::map<int, int> generated_dims;  // subalgebra of C[X] generated by H_k, P_zeta
  std::map<int, int> invariant_dims;  // W-invariants of C[X]
};

InvariantsReport weyl_invariants_check(const HypertoricInput& in, int max_weight2, int zeta_window = 2);

// Lambda_0 vectors with basis coefficients in [-window, window].
std::vector<IntVec> lambda0_window(const HypertoricInput& in, int window);

}  // namespace htva
