#include "stablekit/parse.hpp"

#include <cctype>

namespace stablekit {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Poly run() {
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

  int max_var() const { return max_var_; }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    skip();
    Poly acc(kMaxVars);
    bool first = true;
    while (true) {
      int sign = 1;
      if (accept('+')) sign = 1;
      else if (accept('-')) sign = -1;
      else if (!first) break;
      Poly t = term();
      if (sign < 0) t = -t;
      acc += t;
      first = false;
    }
    return acc;
  }

  Poly term() {
    Poly acc = power();
    while (true) {
      skip();
      if (accept('*')) {
        acc = acc * power();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Poly d = power();
        if (d.total_degree() != 0) {
          pos_ = at;
          fail("division by a non-constant");
        }
        acc *= GaussRat(1) / d.coeff(Exponent{});
      } else if (pos_ < s_.size() && starts_factor(s_[pos_])) {
        acc = acc * power();  // implicit multiplication, e.g. 2z1 or (..)(..)
      } else {
        return acc;
      }
    }
  }

  static bool starts_factor(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '(' || c == 'z' || c == 'i' ||
           c == '.';
  }

  Poly power() {
    Poly base = atom();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      unsigned long e = std::stoul(s_.substr(start, pos_ - start));
      if (e > 512) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Poly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -power();
    }
    if (c == 'i') {
      ++pos_;
      return Poly::constant(kMaxVars, GaussRat::i());
    }
    if (c == 'z') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected variable index after 'z'");
      int idx = std::stoi(s_.substr(start, pos_ - start));
      if (idx < 1 || idx > kMaxVars) {
        pos_ = start;
        fail("variable index out of range");
      }
      max_var_ = std::max(max_var_, idx);
      return Poly::variable(kMaxVars, idx - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Poly number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    mpz_class whole = 0;
    if (pos_ > start) whole = mpz_class(s_.substr(start, pos_ - start));
    Rational value(whole);
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t fs = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (fs == pos_ && start + 1 == pos_) fail("malformed number");
      if (pos_ > fs) {
        mpz_class frac(s_.substr(fs, pos_ - fs));
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, pos_ - fs);
        value += Rational(frac, den);
      }
    }
    value.canonicalize();
    return Poly::constant(kMaxVars, GaussRat(value));
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int max_var_ = 0;
};

}  // namespace

Poly parse_poly(const std::string& text, int min_vars) {
  Parser parser(text);
  Poly p = parser.run();
  return p.with_nvars(std::max(min_vars, parser.max_var()));
}

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (int v = 0; v < p.nvars(); ++v) {
      if (!e[v]) continue;
      if (!mono.empty()) mono += "*";
      mono += "z" + std::to_string(v + 1);
      if (e[v] > 1) mono += "^" + std::to_string(e[v]);
    }
    bool negative = sgn(c.re()) < 0 || (sgn(c.re()) == 0 && sgn(c.im()) < 0);
    GaussRat mag = negative ? -c : c;
    std::string coef = mag.to_string();
    std::string piece;
    if (mono.empty()) piece = coef;
    else if (mag == GaussRat(1)) piece = mono;
    else piece = coef + "*" + mono;
    if (first) out += negative ? "-" + piece : piece;
    else out += negative ? " - " + piece : " + " + piece;
    first = false;
  }
  return out;
}

}  // namespace stablekit
