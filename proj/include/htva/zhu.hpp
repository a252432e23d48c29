#pragma once

#include <htva/brst.hpp>
#include <htva/weyl.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace htva {

// Doubled Deg (conformal weight) of a homogeneous state; throws if mixed.
int zhu_degree2(const FockState& a);

// a *_m b = sum_j binom(Deg_a, j) a_(-m+j) b, evaluated at hbar = 1.
FockState zhu_star(const VertexContext& vctx, const FockState& a, const FockState& b, int m);
FockState zhu_mul(const VertexContext& vctx, const FockState& a, const FockState& b);
FockState zhu_circ(const VertexContext& vctx, const FockState& a, const FockState& b);
// sum_j binom(Deg_a - 1, j) a_(j) b: the commutator a * b - b * a modulo O(V).
FockState zhu_bracket(const VertexContext& vctx, const FockState& a, const FockState& b);

// Rational span of states in monomial coordinates, kept fully reduced.
class RelationSpan {
 public:
  bool insert(const FockState& s);
  bool contains(const FockState& s) const;
  FockState normal_form(const FockState& s) const;
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  int index(const Monomial& m);
  std::map<int, Rational> coords(const FockState& s, bool grow);
  std::map<int, Rational> reduce(std::map<int, Rational> v) const;
  std::map<Monomial, int> index_;
  std::vector<Monomial> monomials_;
  std::map<int, std::map<int, Rational>> rows_;  // pivot -> row with unit pivot
};

// Ghost-0 data of the complex at hbar = 1 up to doubled weight W2.
struct ZhuSetup {
  const BRSTContext* ctx = nullptr;
  int W2 = 4;
  std::map<int, std::vector<FockState>> h0;  // cohomology representatives per weight
  std::map<int, std::vector<FockState>> boundaries;  // d of ghost -1 monomials per weight
};

ZhuSetup zhu_setup(const BRSTContext& ctx, int W2);
// Span of u o v (Deg u + Deg v + 1 <= W) and all boundaries up to W.
RelationSpan zhu_relations(const ZhuSetup& setup);
// Span of boundaries and u_(-2) v at doubled weight w2.
RelationSpan c2_relations(const ZhuSetup& setup, int w2);
// Normal form of a homogeneous state modulo the C2 relations of its weight.
FockState c2_reduce(const ZhuSetup& setup, const FockState& a);

// Free-field Zhu map of a ghost-free state at hbar = 1: x -> x, y -> d, c -> c.
WeylElement free_field_zhu(const BRSTContext& ctx, const FockState& a);
// rho_i = (1/2) sum_k Delta_ik
RatVec rho_shift(const HypertoricInput& in);
// Free-field image with c -> c + rho, reduced modulo the comoment ideal.
ReducedElement to_reduced(const BRSTContext& ctx, const FockState& a);

// Super Poisson bracket of depth-one symbols: {x_k, y_k} = -1, {psi_i, psi*_i} = 1.
FockState symbol(const FockState& a);
FockState symbol_bracket(const FockState& a, const FockState& b);
// Symbol with c_i -> sum_j Delta_ij x_j y_j and ghosts set to zero, in C[x, y].
MPoly reduced_symbol(const HypertoricInput& in, const FockState& a);
MPoly classical_bracket(int N, const MPoly& f, const MPoly& g);

struct PoissonReport {
  int pairs = 0;
  int symbol_failures = 0;
  int reduced_failures = 0;
  int derivative_checks = 0;
  int derivative_failures = 0;
  std::vector<std::string> mismatches;
  bool ok() const { return pairs > 0 && symbol_failures == 0 && reduced_failures == 0 && derivative_failures == 0; }
};

PoissonReport c2_poisson_check(const ZhuSetup& setup, int pairs, uint64_t seed);

struct NamedGenerator {
  std::string name;
  FockState va;
  WeylElement weyl;
};

// H~_k and P~_zeta, P~_-zeta for the Lambda_0 basis.
std::vector<NamedGenerator> zhu_generators(const BRSTContext& ctx);

struct CommutatorCheck {
  std::string a, b;
  bool formula_matches = false;  // reduced image of the bracket equals the Weyl commutator
  bool literal_checked = false;
  bool literal_matches = false;  // a*b - b*a - bracket lies in O(V) + im d
  bool eigen_checked = false;
  bool eigen_matches = false;  // [H~_j, P~_zeta] = zeta_j P~_zeta
  std::string va;
  std::string weyl;
};

struct ZhuCompareReport {
  std::vector<CommutatorCheck> commutators;
  std::map<int, int> c2_dims;  // generated subalgebra of the C2 quotient, per doubled weight
  std::map<int, int> classical_dims;  // generated subalgebra of C[X], per doubled degree
  std::map<int, int> invariant_dims;  // W-invariants of C[X]
  std::vector<std::string> mismatches;
  bool commutators_ok() const;
  bool dims_ok() const { return c2_dims == classical_dims; }
};

ZhuCompareReport compare_zhu_weyl(const BRSTContext& ctx, int W2);

}  // namespace htva
