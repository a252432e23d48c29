#pragma once

#include <htva/brst.hpp>

#include <optional>
#include <string>
#include <vector>

namespace htva {

struct ConformalVector {
  FockState state;
  RatVec lambda;
  Rational central_charge;
};

// omega_H = 1/2 sum_i c_i(-1) c^i with the dual basis under the Gram form.
FockState omega_heisenberg(const BRSTContext& ctx);
// kappa x_j(-2) y_j(-1) + (kappa - 1) x_j(-1) y_j(-2), no hbar prefactor.
FockState omega_betagamma(const BRSTContext& ctx, const Rational& kappa, int j);
FockState omega_fermion(const BRSTContext& ctx);

// Throws InputError if lambda is not orthogonal to the rows of Delta,
// DomainError if the Gram form is singular or the result is not closed.
ConformalVector build_omega(const BRSTContext& ctx, const RatVec& lambda);

struct VirasoroReport {
  bool quartic_scalar = false;  // pole 4 is a multiple of hbar^4 times the vacuum
  Rational quartic;  // that multiple
  bool cubic_zero = false;
  bool quadratic_matches = false;  // pole 2 equals 2 hbar^2 omega
  bool linear_matches = false;  // pole 1 equals hbar^2 d omega
  bool no_higher_poles = false;
  Rational central_charge;  // twice the quartic coefficient
  std::vector<std::string> mismatches;
  bool ok(const Rational& expected_quartic) const;
};

VirasoroReport virasoro_check(const VertexContext& vctx, const FockState& omega);

enum class LemmaKind { Heis, BetaGamma, Clifford };

struct LemmaMismatch {
  long m = 0;
  long n = 0;
  std::string generator;
  std::string state;
  std::string got;
  std::string expected;
};

struct LemmaReport {
  LemmaKind kind = LemmaKind::Heis;
  long checks = 0;
  long failures = 0;
  std::vector<LemmaMismatch> mismatches;  // first few only
};

// Commutators [omega_(m+1), g_(n)] on every monomial of doubled weight <= max_w2
// compared to the closed formulas: -hbar^2 n c_i(m+n); -hbar (n + kappa) x,
// -hbar (n - kappa + 1) y (delta_jk inserted); hbar n psi*, hbar n psi.
LemmaReport commutator_lemma_check(const BRSTContext& ctx, LemmaKind kind, long m_lo, long m_hi, long n_lo, long n_hi,
                                   const Rational& kappa, int max_w2 = 4);

struct RadicalReport {
  FockState zeta;
  bool annihilates = false;
  bool closed = false;
};

// Present only when the Gram form of ctx is singular.
std::optional<RadicalReport> radical_center_check(const BRSTContext& ctx, int max_w2 = 4);

// Monomials of doubled conformal weight <= max_w2 across all ghost numbers.
std::vector<Monomial> spanning_monomials(const BRSTContext& ctx, int max_w2);

}  // namespace htva
