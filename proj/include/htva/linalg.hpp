#pragma once

#include <htva/rational.hpp>

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace htva {

// Sparse vector: sorted (index, value) pairs with nonzero values.
using SparseVec = std::vector<std::pair<int, Rational>>;
using SparseIntVec = std::vector<std::pair<int, Integer>>;

SparseVec sparse_from_map(const std::map<int, Rational>& m);

// Incremental row echelon form over the integers (fraction-free).  Each stored
// vector is primitive with a distinct leading index.  An optional tag records
// the combination of inserted vectors that produced each stored row.
class Echelon {
 public:
  explicit Echelon(bool track = false) : track_(track) {}

  // Returns true if v was independent of the vectors inserted so far.
  bool insert(const SparseVec& v, int tag = -1);
  bool contains(const SparseVec& v) const;
  // Remainder of v after elimination, scaled to a primitive integer vector.
  SparseIntVec reduce(const SparseVec& v) const;
  int rank() const { return static_cast<int>(rows_.size()); }
  // Kernel relations found while inserting (only when tracking).
  const std::vector<SparseVec>& relations() const { return relations_; }

 private:
  struct Row {
    SparseIntVec vec;
    SparseIntVec tag;
  };
  void eliminate(SparseIntVec& v, SparseIntVec* tag) const;
  bool track_;
  std::map<int, Row> rows_;
  std::vector<SparseVec> relations_;
};

// Sparse matrix stored by columns.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<SparseVec> columns;
};

int rank(const SparseMatrix& a);
// Basis of {t : sum_j t_j col_j = 0}.
std::vector<SparseVec> kernel(const SparseMatrix& a);

// Dense exact helpers.
RatMat rref(RatMat a, std::vector<int>* pivots = nullptr);
int rank(const RatMat& a);
std::optional<RatMat> inverse(const RatMat& a);
// Solve a x = b; nullopt if inconsistent.  Free variables are set to zero.
std::optional<RatVec> solve(const RatMat& a, const RatVec& b);
Integer determinant(const IntMat& a);
RatMat to_rational(const IntMat& a);

// Saturated integer kernel of a (rows x n) via unimodular column reduction.
IntMat integer_kernel(const IntMat& a);

}  // namespace htva
