#include <cctype>
#include <optional>

#include "tdscalc/poly.hpp"

namespace tdsc {

namespace {

struct Token {
  enum Kind { Int, Var, Plus, Minus, Star, Caret, Slash, LParen, RParen, End } kind;
  std::string text;  // Int digits
  int var_index = 0;
  size_t pos = 0;
};

class Lexer {
public:
  Lexer(const std::string& s, int num_vars) : s_(s), num_vars_(num_vars) {}

  Token next() {
    while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) ++i_;
    size_t pos = i_;
    if (i_ >= s_.size()) return {Token::End, "", 0, pos};
    char c = s_[i_];
    switch (c) {
      case '+': ++i_; return {Token::Plus, "+", 0, pos};
      case '-': ++i_; return {Token::Minus, "-", 0, pos};
      case '*': ++i_; return {Token::Star, "*", 0, pos};
      case '^': ++i_; return {Token::Caret, "^", 0, pos};
      case '/': ++i_; return {Token::Slash, "/", 0, pos};
      case '(': ++i_; return {Token::LParen, "(", 0, pos};
      case ')': ++i_; return {Token::RParen, ")", 0, pos};
      default: break;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t j = i_;
      while (j < s_.size() && std::isdigit((unsigned char)s_[j])) ++j;
      Token t{Token::Int, s_.substr(i_, j - i_), 0, pos};
      i_ = j;
      return t;
    }
    if (c == 'x') {
      size_t j = i_ + 1;
      while (j < s_.size() && std::isdigit((unsigned char)s_[j])) ++j;
      if (j == i_ + 1) fail("expected variable index after 'x'", pos);
      int idx = 0;
      for (size_t k = i_ + 1; k < j; ++k) {
        idx = idx * 10 + (s_[k] - '0');
        if (idx > 1000000) fail("variable index too large", pos);
      }
      if (idx >= num_vars_)
        fail("variable x" + std::to_string(idx) + " out of range (have " +
                 std::to_string(num_vars_) + " variables)",
             pos);
      i_ = j;
      return {Token::Var, s_.substr(pos, j - pos), idx, pos};
    }
    fail(std::string("unexpected character '") + c + "'", pos);
    return {};  // unreachable
  }

  [[noreturn]] static void fail(const std::string& msg, size_t pos) {
    throw CalcError(ErrorKind::Syntax, msg + " at position " + std::to_string(pos));
  }

private:
  const std::string& s_;
  int num_vars_;
  size_t i_ = 0;
};

class Parser {
public:
  Parser(const std::string& s, int num_vars) : lex_(s, num_vars), num_vars_(num_vars) {
    advance();
  }

  PolyExpr parse() {
    PolyExpr e = sum();
    expect(Token::End, "end of input");
    return e;
  }

private:
  void advance() { tok_ = lex_.next(); }

  void expect(Token::Kind k, const std::string& what) {
    if (tok_.kind == k) return;
    if (tok_.kind == Token::Slash)
      Lexer::fail("'/' is only allowed inside a rational literal", tok_.pos);
    Lexer::fail("expected " + what, tok_.pos);
  }

  PolyExpr sum() {
    PolyExpr e = product();
    while (tok_.kind == Token::Plus || tok_.kind == Token::Minus) {
      bool minus = tok_.kind == Token::Minus;
      advance();
      PolyExpr rhs = product();
      if (minus)
        e -= rhs;
      else
        e += rhs;
    }
    return e;
  }

  PolyExpr product() {
    PolyExpr e = unary();
    while (tok_.kind == Token::Star) {
      advance();
      e = e * unary();
    }
    return e;
  }

  PolyExpr unary() {
    if (tok_.kind == Token::Minus) {
      advance();
      return -unary();
    }
    return power();
  }

  PolyExpr power() {
    PolyExpr base = atom();
    while (tok_.kind == Token::Caret) {
      advance();
      expect(Token::Int, "integer exponent after '^'");
      long long e = 0;
      for (char c : tok_.text) {
        e = e * 10 + (c - '0');
        if (e > 64) Lexer::fail("exponent too large", tok_.pos);
      }
      advance();
      base = base.pow((int)e);
    }
    return base;
  }

  PolyExpr atom() {
    switch (tok_.kind) {
      case Token::Int: {
        BigInt num(tok_.text);
        size_t pos = tok_.pos;
        advance();
        if (tok_.kind == Token::Slash) {
          advance();
          expect(Token::Int, "integer denominator after '/'");
          BigInt den(tok_.text);
          if (den == 0) Lexer::fail("zero denominator", tok_.pos);
          advance();
          return PolyExpr::constant(num_vars_, Rational(num, den));
        }
        (void)pos;
        return PolyExpr::constant(num_vars_, Rational(num));
      }
      case Token::Var: {
        int idx = tok_.var_index;
        advance();
        return PolyExpr::variable(num_vars_, idx);
      }
      case Token::LParen: {
        advance();
        PolyExpr e = sum();
        expect(Token::RParen, "')'");
        advance();
        return e;
      }
      case Token::Slash:
        Lexer::fail("'/' is only allowed inside a rational literal", tok_.pos);
      default:
        Lexer::fail("expected a literal, variable, or '('", tok_.pos);
    }
    return PolyExpr(num_vars_);  // unreachable
  }

  Lexer lex_;
  Token tok_;
  int num_vars_;
};

}  // namespace

PolyExpr parse_poly(const std::string& text, int num_vars) {
  return Parser(text, num_vars).parse();
}

}  // namespace tdsc
