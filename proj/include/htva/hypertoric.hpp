#pragma once

#include <htva/rational.hpp>

#include <string>
#include <vector>

namespace htva {

struct HypertoricInput {
  IntMat delta;  // M x N
  RatVec stability;  // length M
  int M = 0;
  int N = 0;

  static HypertoricInput make(IntMat delta, RatVec stability);
  IntVec column(int j) const;
};

struct ValidationReport {
  bool rank_ok = false;
  bool gcd_ok = false;
  bool unimodular = false;
};

struct Wall {
  std::vector<int> spanning;  // all columns lying in the wall, 0-based
  RatMat basis;  // rref basis of the (M-1)-dimensional span
  IntVec normal;  // primitive integer normal vector
};

struct Chart {
  std::vector<int> J;  // 0-based, increasing
  RatVec alpha;  // indexed like J
  std::vector<int> J1, J2;
  IntMat lambda;  // M x M, sum_j lambda[i][j] * Delta_{J[j]} = e_i
  // t_exponents[i][k]: exponent of x_{J[k]} (k in J1) or y_{J[k]} (k in J2) in T_i.
  IntMat t_exponents;
  // For j not in J: exponents of T in a*_j = x_j T^{-Delta_j} and a_j = y_j T^{Delta_j}.
  std::vector<int> free_sites;
  IntMat astar_t_power;  // astar_t_power[f] = -Delta_{free_sites[f]}
  bool in_J1(int site) const;
  bool in_J2(int site) const;
};

struct SignedPermutation {
  std::vector<int> perm;  // perm[k] = image of coordinate k, 0-based
  std::vector<int> signs;  // sign attached to target coordinate

  IntVec apply(const IntVec& v) const;
  SignedPermutation compose(const SignedPermutation& o) const;  // this after o
  SignedPermutation inverse() const;
  bool operator==(const SignedPermutation& o) const { return perm == o.perm && signs == o.signs; }
  bool operator<(const SignedPermutation& o) const {
    return perm != o.perm ? perm < o.perm : signs < o.signs;
  }
};

constexpr int kWeylEnumerationBound = 10;

ValidationReport validate(const HypertoricInput& in);
void require_unimodular(const HypertoricInput& in);
IntMat gram_matrix(const HypertoricInput& in);
std::vector<Wall> git_walls(const HypertoricInput& in);
bool is_generic(const HypertoricInput& in);
// Is delta in the cone spanned by Delta_j (j in J1) and -Delta_j (j in J2)?
bool semistable(const HypertoricInput& in, const std::vector<int>& J1, const std::vector<int>& J2);
std::vector<Chart> enumerate_charts(const HypertoricInput& in);
Chart chart_for(const HypertoricInput& in, const std::vector<int>& J);
IntMat lattice_lambda0(const HypertoricInput& in);
RatVec euler_beta(const HypertoricInput& in, int k);
std::vector<SignedPermutation> weyl_group(const HypertoricInput& in);

std::vector<std::vector<int>> subsets(int n, int k);

}  // namespace htva
