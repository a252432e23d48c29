#pragma once

#include <htva/fock.hpp>
#include <htva/hypertoric.hpp>
#include <htva/linalg.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace htva {

// Memo of the quantum differential on hbar-free monomials.
class DifferentialCache {
 public:
  bool lookup(const Monomial& m, FockState* out) const;
  void store(const Monomial& m, const FockState& d);

 private:
  mutable std::mutex mutex_;
  std::map<Monomial, FockState> memo_;
};

struct BRSTContext {
  HypertoricInput input;
  VertexContext vctx;
  std::vector<FockState> comoments;
  FockState Q;
  std::optional<Chart> chart;
  std::shared_ptr<DifferentialCache> cache = std::make_shared<DifferentialCache>();

  // gram_override replaces the Heisenberg form (test hook for degenerate forms).
  static BRSTContext make(const HypertoricInput& in, std::optional<IntMat> gram_override = std::nullopt);
};

FockState chiral_comoment(const BRSTContext& ctx, int i);
FockState differential(const BRSTContext& ctx, const FockState& a);
std::pair<FockState, FockState> differential_split(const BRSTContext& ctx, const FockState& a);
// hbar^{-1} Q_(0) a computed as a single n-th product.
FockState differential_from_charge(const BRSTContext& ctx, const FockState& a);
FockState classical_differential(const BRSTContext& ctx, const FockState& a);

struct GradedPiece {
  int w2 = 0;  // doubled conformal weight
  int m2 = 0;  // doubled S-weight
  int g = 0;
  std::vector<Monomial> basis;
  std::vector<int> hbar_power;
  SparseMatrix d_matrix;  // into the (w, m, g+1) piece

  FockState element(size_t i) const;
  FockState vector_to_state(const SparseVec& v) const;
};

// All creation monomials of doubled conformal weight w2 and ghost number g.
std::vector<Monomial> enumerate_monomials(const BRSTContext& ctx, int w2, int g);
GradedPiece basis_of_piece(const BRSTContext& ctx, int w2, int m2, int g, bool with_matrix = true);

struct CohomologyResult {
  int dim_kernel = 0;
  int dim_image_in = 0;
  int dim_H = 0;
  std::vector<FockState> basis_of_H;
};

CohomologyResult cohomology(const BRSTContext& ctx, int w2, int m2, int g);

// Complex at hbar = 1, graded by conformal weight and ghost number only.
struct LevelPiece {
  int w2 = 0;
  int g = 0;
  std::vector<Monomial> basis;
  SparseMatrix d_matrix;
};
LevelPiece level_piece(const BRSTContext& ctx, int w2, int g, bool with_matrix = true);
// Ghost-0 cohomology at hbar = 1 in conformal weight w2: representatives.
std::vector<FockState> level_cohomology(const BRSTContext& ctx, int w2);

// Identity sweep over every monomial of doubled weight <= max_w2 whose
// intrinsic S-weight fits under max_m2.
struct ComplexCheck {
  int pieces = 0;  // nonempty (w, m, g) pieces
  long monomials = 0;
  long d_squared_failures = 0;
  long charge_failures = 0;  // d against hbar^{-1} Q_(0)
  long split_failures = 0;  // d+ + d- against d, (d+)^2, (d-)^2, d+d- + d-d+
  long classical_failures = 0;  // classical d against d mod hbar
  long classical_square_failures = 0;
  // (w2, m2, g) -> dim H^g for g in {-1, -2}
  std::map<std::tuple<int, int, int>, int> negative_ghost_dims;
  std::vector<std::string> mismatches;  // first few only

  bool d_squared_zero() const { return monomials > 0 && d_squared_failures == 0; }
  bool quantum_consistent() const { return charge_failures == 0 && split_failures == 0; }
  bool classical_consistent() const { return classical_failures == 0 && classical_square_failures == 0; }
  bool negative_ghost_vanishing() const;
};

ComplexCheck complex_check(const BRSTContext& ctx, int max_w2, int max_m2, bool with_charge = true);

struct NamedState {
  std::string name;
  FockState state;
};

Monomial chart_T_power(const BRSTContext& ctx, const Chart& chart, const IntVec& v);
FockState chart_astar(const BRSTContext& ctx, const Chart& chart, int site);
FockState chart_a(const BRSTContext& ctx, const Chart& chart, int site);
FockState chart_b(const BRSTContext& ctx, const Chart& chart, int i);
FockState p_tilde(const BRSTContext& ctx, const IntVec& zeta);
FockState h_tilde(const BRSTContext& ctx, int k);

// P(zeta), P(-zeta) over the Lambda_0 basis, H_k, and with a chart the local
// generators astar_j, a_j (j not in J) and b_i.
std::vector<NamedState> generator_candidates(const BRSTContext& ctx, const std::optional<Chart>& chart);
// Same list; throws DomainError if any element is not closed.
std::vector<NamedState> closed_generators(const BRSTContext& ctx, const std::optional<Chart>& chart);

// Closedness of the chart generators and their pairwise OPEs: a_j' astar_j has
// a simple pole hbar delta_jj', b_i b_i' a double pole hbar^2 G_ii', the rest vanish
// up to skew-symmetry.
struct ChartCheck {
  std::vector<std::pair<std::string, bool>> closed;
  int ope_checks = 0;
  int ope_failures = 0;
  std::vector<std::string> mismatches;
  bool ok() const { return ope_failures == 0 && std::all_of(closed.begin(), closed.end(), [](const auto& c) { return c.second; }); }
};

ChartCheck chart_check(const BRSTContext& ctx, const Chart& chart);

}  // namespace htva
