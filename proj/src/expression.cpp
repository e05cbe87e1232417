#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <string>
#include <vector>

#include "qidx/cli.hpp"
#include "qidx/error.hpp"

namespace qidx::cli {
namespace {

enum class Tok { Number, Imag, Var, Plus, Minus, Star, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;  // digits of a Number / Imag
  double value = 0.0;
  int axis = -1;          // Var: 0-based coordinate
  bool indexed = false;   // Var: written as zK rather than z
};

[[noreturn]] void fail(std::size_t pos, const std::string& what) {
  throw Error(ErrorCode::ParseError, "position " + std::to_string(pos) + ": " + what);
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto digits = [&](std::size_t j) {
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    return j;
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    switch (c) {
      case '+': out.push_back({Tok::Plus, i++, {}}); continue;
      case '-': out.push_back({Tok::Minus, i++, {}}); continue;
      case '*': out.push_back({Tok::Star, i++, {}}); continue;
      case '^': out.push_back({Tok::Caret, i++, {}}); continue;
      case '(': out.push_back({Tok::LParen, i++, {}}); continue;
      case ')': out.push_back({Tok::RParen, i++, {}}); continue;
      case 'i': out.push_back({Tok::Imag, i++, "1", 1.0}); continue;
      default: break;
    }
    if (c == 'z') {
      const std::size_t end = digits(i + 1);
      Token t{Tok::Var, start, {}};
      if (end > i + 1) {
        int k = 0;
        const auto [p, ec] = std::from_chars(s.data() + i + 1, s.data() + end, k);
        if (ec != std::errc() || k < 1) fail(start, "variable index must be a positive integer");
        t.axis = k - 1;
        t.indexed = true;
      } else {
        t.axis = 0;
      }
      out.push_back(t);
      i = end;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = digits(i);
      if (j < s.size() && s[j] == '.') j = digits(j + 1);
      if (j == i + 1 && c == '.') fail(start, "malformed number");
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        const std::size_t e = digits(k);
        if (e == k) fail(j, "malformed exponent");
        j = e;
      }
      Token t{Tok::Number, start, s.substr(i, j - i)};
      t.value = std::strtod(t.text.c_str(), nullptr);
      if (j < s.size() && s[j] == 'i') {
        t.kind = Tok::Imag;
        ++j;
      }
      out.push_back(t);
      i = j;
      continue;
    }
    fail(start, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, s.size(), {}});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, int dim) : toks_(std::move(toks)), dim_(dim) {}

  LaurentPoly parse() {
    LaurentPoly r = expr();
    if (peek().kind != Tok::End) fail(peek().pos, "unexpected trailing input");
    return r;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  LaurentPoly expr() {
    LaurentPoly r = accept(Tok::Minus) ? -term() : term();
    for (;;) {
      if (accept(Tok::Plus)) {
        r += term();
      } else if (accept(Tok::Minus)) {
        r -= term();
      } else {
        return r;
      }
    }
  }

  LaurentPoly term() {
    LaurentPoly r = factor();
    while (accept(Tok::Star)) r *= factor();
    return r;
  }

  std::int64_t integer(bool allow_negative) {
    bool negative = false;
    if (peek().kind == Tok::Minus || peek().kind == Tok::Plus) negative = next().kind == Tok::Minus;
    const Token& t = peek();
    if (t.kind != Tok::Number || t.text.find_first_not_of("0123456789") != std::string::npos) {
      fail(t.pos, "expected an integer power");
    }
    ++pos_;
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) fail(t.pos, "power out of range");
    if (negative && !allow_negative) fail(t.pos, "negative power of a parenthesized expression");
    return negative ? -v : v;
  }

  LaurentPoly factor() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Number: return LaurentPoly::constant(dim_, t.value);
      case Tok::Imag: return LaurentPoly::constant(dim_, Complex(0.0, t.value));
      case Tok::Var: {
        std::int64_t power = 1;
        if (accept(Tok::Caret)) {
          const std::size_t at = peek().pos;
          power = integer(true);
          if (power == 0) fail(at, "powers must be nonzero");
        }
        return LaurentPoly::variable(dim_, t.axis, power);
      }
      case Tok::LParen: {
        LaurentPoly inner = expr();
        if (!accept(Tok::RParen)) fail(peek().pos, "expected ')'");
        if (accept(Tok::Caret)) {
          const std::size_t at = peek().pos;
          const std::int64_t power = integer(false);
          if (power > 64) fail(at, "power of a parenthesized expression above 64");
          return pow(inner, power);
        }
        return inner;
      }
      case Tok::End: fail(t.pos, "unexpected end of input");
      default: fail(t.pos, "expected a variable, number or '('");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int dim_;
};

}  // namespace

LaurentPoly parse_expression(const std::string& src, int dim_hint) {
  std::vector<Token> toks = lex(src);
  bool plain = false, indexed = false;
  int inferred = 0;
  for (const Token& t : toks) {
    if (t.kind != Tok::Var) continue;
    (t.indexed ? indexed : plain) = true;
    if (plain && indexed) throw Error(ErrorCode::DimError, "position " + std::to_string(t.pos) + ": mixed z and zK");
    inferred = std::max(inferred, t.axis + 1);
  }
  if (dim_hint > 0 && inferred > dim_hint) {
    throw Error(ErrorCode::DimError,
                "expression uses " + std::to_string(inferred) + " variables, expected " + std::to_string(dim_hint));
  }
  const int dim = std::max({inferred, dim_hint, 1});
  if (plain && dim > 1) throw Error(ErrorCode::DimError, "plain z in a " + std::to_string(dim) + "-D symbol; use z1..zN");
  return Parser(std::move(toks), dim).parse();
}

}  // namespace qidx::cli
