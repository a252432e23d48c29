#include <htva/parser.hpp>

#include <cctype>
#include <sstream>
#include <variant>

namespace htva {

namespace {

struct ModeFactor {
  Generator g;
  long index;
  long power;
};
struct HbarFactor {
  long power;
};
struct SubFactor {
  FockState state;
};
using AnyFactor = std::variant<ModeFactor, HbarFactor, SubFactor>;

class Parser {
 public:
  Parser(const std::string& t, const VertexContext& c) : text_(t), ctx_(c) {}

  FockState parse() {
    FockState s = element();
    skip();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return s;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  long integer(bool allow_sign) {
    skip();
    size_t start = pos_;
    bool neg = false;
    if (allow_sign && pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      neg = text_[pos_] == '-';
      ++pos_;
    }
    size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) throw ParseError("expected integer", start);
    long v = std::stol(text_.substr(digits, pos_ - digits));
    return neg ? -v : v;
  }

  FockState element() {
    FockState total;
    bool first = true;
    while (true) {
      skip();
      int sign = 1;
      if (accept('+')) sign = 1;
      else if (accept('-')) sign = -1;
      else if (!first) break;
      FockState t = term();
      if (sign < 0) t = -t;
      total += t;
      first = false;
      if (!peek('+') && !peek('-')) break;
    }
    return total;
  }

  bool at_factor_start() {
    skip();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return c == 'x' || c == 'y' || c == 'c' || c == 'p' || c == 'h' || c == '(';
  }

  FockState term() {
    skip();
    Rational coeff = 1;
    bool have_coeff = false;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      long num = integer(false);
      long den = 1;
      if (accept('/')) {
        size_t at = pos_;
        den = integer(false);
        if (den == 0) throw ParseError("zero denominator", at);
      }
      coeff = ratio(num, den);
      have_coeff = true;
    }
    std::vector<AnyFactor> factors;
    if (at_factor_start()) {
      factors.push_back(factor());
      while (true) {
        if (accept('*')) {
          factors.push_back(factor());
        } else if (at_factor_start()) {
          factors.push_back(factor());
        } else {
          break;
        }
      }
    } else if (!have_coeff) {
      throw ParseError("expected term", pos_);
    }
    FockState st = FockState::vacuum();
    HPoly scalar(coeff);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      if (auto* h = std::get_if<HbarFactor>(&*it)) {
        scalar *= HPoly::monomial(1, static_cast<int>(h->power));
      } else if (auto* sub = std::get_if<SubFactor>(&*it)) {
        st = nth_product(ctx_, sub->state, st, -1);
      } else {
        const auto& mf = std::get<ModeFactor>(*it);
        if (mf.power < 0) {
          Monomial inv;
          inv.f.push_back({make_key(mf.g.kind, mf.g.site, static_cast<int>(-mf.index)), static_cast<int>(mf.power)});
          st = normal_product(FockState::of(inv), st);
        } else {
          for (long r = 0; r < mf.power; ++r) st = apply_mode(ctx_, mf.g, mf.index, st);
        }
      }
    }
    return scalar * st;
  }

  AnyFactor factor() {
    skip();
    size_t start = pos_;
    if (accept('(')) {
      FockState s = element();
      expect(')');
      return SubFactor{s};
    }
    if (pos_ < text_.size() && text_[pos_] == 'h' ) {
      ++pos_;
      long p = 1;
      if (accept('^')) p = integer(false);
      return HbarFactor{p};
    }
    Kind kind;
    if (text_.compare(pos_, 4, "psi*") == 0) {
      kind = Kind::PsiStar;
      pos_ += 4;
    } else if (text_.compare(pos_, 3, "psi") == 0) {
      kind = Kind::Psi;
      pos_ += 3;
    } else if (pos_ < text_.size() && (text_[pos_] == 'x' || text_[pos_] == 'y' || text_[pos_] == 'c')) {
      kind = text_[pos_] == 'x' ? Kind::X : text_[pos_] == 'y' ? Kind::Y : Kind::C;
      ++pos_;
    } else {
      throw ParseError("expected generator", start);
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw ParseError("expected site index", pos_);
    long site = integer(false);
    Generator g{kind, static_cast<int>(site - 1)};
    if (site < 1) throw ParseError("site index must be positive", start);
    try {
      ctx_.check(g);
    } catch (const InputError& e) {
      throw ParseError(e.what(), start);
    }
    expect('[');
    long index = integer(true);
    expect(']');
    long power = 1;
    if (accept('^')) power = integer(true);
    if (power < 0) {
      if (!((kind == Kind::X || kind == Kind::Y) && index == -1))
        throw ParseError("negative power allowed only on x/y (-1)-modes", start);
    }
    if (index > 4000 || index < -4000) throw ParseError("mode index out of range", start);
    return ModeFactor{g, index, power};
  }

  const std::string& text_;
  const VertexContext& ctx_;
  size_t pos_ = 0;
};

}  // namespace

FockState parse_element(const std::string& text, const VertexContext& ctx) { return Parser(text, ctx).parse(); }

std::string to_expression(const FockState& s) {
  if (s.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : s.terms) {
    for (int k = 0; k <= c.degree(); ++k) {
      Rational q = c[k];
      if (q == 0) continue;
      if (first) {
        if (q < 0) os << "-";
      } else {
        os << (q < 0 ? " - " : " + ");
      }
      first = false;
      Rational a = abs(q);
      std::vector<std::string> parts;
      if (k > 0) parts.push_back(k == 1 ? "h" : "h^" + std::to_string(k));
      for (const auto& x : m.f) {
        std::string f = std::string(kind_name(key_kind(x.key))) + std::to_string(key_site(x.key) + 1) + "[" +
                        std::to_string(-key_depth(x.key)) + "]";
        if (x.exp != 1) f += "^" + std::to_string(x.exp);
        parts.push_back(f);
      }
      bool show = a != 1 || parts.empty();
      if (show) os << a.get_str();
      for (size_t i = 0; i < parts.size(); ++i) {
        if (i == 0) os << (show ? " " : "");
        else os << "*";
        os << parts[i];
      }
    }
  }
  return os.str();
}

}  // namespace htva
