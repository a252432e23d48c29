#pragma once

#include <htva/hpoly.hpp>
#include <htva/rational.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace htva {

enum class Kind : uint8_t { X = 0, Y = 1, C = 2, PsiStar = 3, Psi = 4 };

inline bool is_odd(Kind k) { return k >= Kind::PsiStar; }
// Doubled conformal weight of the (-1)-mode.
int conf2(Kind k);
// Doubled S-weight.
int sweight2(Kind k);
int ghost(Kind k);
const char* kind_name(Kind k);

struct Generator {
  Kind kind;
  int site;  // 0-based
};

// A creation mode g_(-depth), depth >= 1, packed so that integer order is the
// canonical monomial order: kind, then site, then mode index descending.
using ModeKey = uint32_t;

inline ModeKey make_key(Kind k, int site, int depth) {
  return (static_cast<uint32_t>(k) << 24) | (static_cast<uint32_t>(site) << 12) | static_cast<uint32_t>(depth);
}
inline Kind key_kind(ModeKey k) { return static_cast<Kind>(k >> 24); }
inline int key_site(ModeKey k) { return static_cast<int>((k >> 12) & 0xfff); }
inline int key_depth(ModeKey k) { return static_cast<int>(k & 0xfff); }
inline bool key_odd(ModeKey k) { return is_odd(key_kind(k)); }

struct Factor {
  ModeKey key;
  int exp;
  bool operator==(const Factor& o) const { return key == o.key && exp == o.exp; }
  bool operator<(const Factor& o) const { return key != o.key ? key < o.key : exp < o.exp; }
};

struct Monomial {
  std::vector<Factor> f;  // sorted by key, exponents nonzero

  bool operator==(const Monomial& o) const { return f == o.f; }
  bool operator<(const Monomial& o) const { return f < o.f; }
  bool empty() const { return f.empty(); }
  bool localized() const;
  int find(ModeKey k) const;  // index or -1
  int odd_before(size_t pos) const;
  int exponent(ModeKey k) const;
  int max_depth() const;
  int conf2() const;
  int intrinsic_s2() const;
  int ghost() const;
  int odd_count() const;
};

// Supercommutative product of creation monomials; returns sign 0 if an odd
// mode would be squared.
int monomial_product(const Monomial& a, const Monomial& b, Monomial* out);
// Remove one power of the factor at pos; returns the sign of moving it to the front.
int remove_factor(const Monomial& m, size_t pos, Monomial* out);

class FockState {
 public:
  std::map<Monomial, HPoly> terms;

  static FockState vacuum();
  static FockState of(const Monomial& m, const HPoly& c = HPoly(1));
  static FockState mode(Kind k, int site, int depth);

  bool is_zero() const { return terms.empty(); }
  bool localized() const;
  void add(const Monomial& m, const HPoly& c);

  FockState& operator+=(const FockState& o);
  FockState& operator-=(const FockState& o);
  FockState& operator*=(const HPoly& c);
  FockState operator-() const;
  bool operator==(const FockState& o) const { return terms == o.terms; }
  bool operator!=(const FockState& o) const { return !(*this == o); }

  FockState specialize() const;  // hbar -> 1
  FockState mod_hbar() const;  // constant term in hbar
  int max_hbar_degree() const;
  int max_depth() const;
  std::string str() const;
};

FockState operator+(FockState a, const FockState& b);
FockState operator-(FockState a, const FockState& b);
FockState operator*(const HPoly& c, FockState a);
FockState operator*(FockState a, const HPoly& c);
// Normally ordered (supercommutative) product of creation-mode states.
FockState normal_product(const FockState& a, const FockState& b);

struct VertexContext {
  int N = 0;
  int M = 0;
  IntMat gram;
  // Eigenvalues of c_i(0): zero on the vacuum module, lambda on a Fock module.
  std::optional<RatVec> charge;

  void check(const Generator& g) const;
  void check(const FockState& s) const;
};

struct Gradings {
  bool homogeneous = true;
  int conf2 = 0;
  int s2 = 0;
  int ghost = 0;
  std::vector<std::tuple<int, int, int>> distinct;
};

FockState apply_mode(const VertexContext& ctx, Generator g, long n, const FockState& s);
// a_(n) s by field reconstruction; a must not contain inverted modes.
FockState field_mode(const VertexContext& ctx, const FockState& a, long n, const FockState& s);
// a_(n) b through the bi-differential Wick formula; a may be localized.
FockState wick_product(const VertexContext& ctx, const FockState& a, const FockState& b, long n);
// Singular part {n >= 0 : a_(n) b} through the Wick formula.
std::map<long, FockState> wick_singular(const VertexContext& ctx, const FockState& a, const FockState& b);

FockState nth_product(const VertexContext& ctx, const FockState& a, const FockState& b, long n);
std::vector<std::pair<long, FockState>> ope(const VertexContext& ctx, const FockState& a, const FockState& b);
// Largest n with a_(n) s possibly nonzero.
long max_product_index(const VertexContext& ctx, const FockState& a, const FockState& s);

FockState translation(const FockState& a);
FockState divided_translation(const FockState& a, int k);  // d^k a / k!
Gradings gradings(const FockState& a);
FockState dlog(const Monomial& m);
FockState hbar_divide(const FockState& a, int k);
FockState fock_action(const VertexContext& ctx, const FockState& a, long n, const RatVec& lambda, const FockState& v);

// Parity of a homogeneous state; throws if mixed.
int parity(const FockState& a);

}  // namespace htva
