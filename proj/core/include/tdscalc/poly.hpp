#pragma once

#include <map>
#include <span>
#include <string>

#include "tdscalc/rational.hpp"

namespace tdsc {

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Canonical form: no zero coefficients are stored and every exponent
/// vector has length num_vars(). Two PolyExpr are equal iff their term
/// maps are equal, so operator== decides polynomial identity.
class PolyExpr {
public:
  using Exponents = std::vector<int>;
  using TermMap = std::map<Exponents, Rational>;

  explicit PolyExpr(int num_vars = 0) : num_vars_(num_vars) {}

  static PolyExpr constant(int num_vars, const Rational& c);
  static PolyExpr variable(int num_vars, int index);
  static PolyExpr monomial(int num_vars, Exponents exps, const Rational& c);

  int num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  /// Coefficient of the given exponent vector (0 when absent).
  Rational coeff(const Exponents& e) const;
  Rational constant_term() const;

  void add_term(const Exponents& exps, const Rational& c);

  PolyExpr operator-() const;
  PolyExpr& operator+=(const PolyExpr& o);
  PolyExpr& operator-=(const PolyExpr& o);
  friend PolyExpr operator+(PolyExpr a, const PolyExpr& b) { return a += b; }
  friend PolyExpr operator-(PolyExpr a, const PolyExpr& b) { return a -= b; }
  friend PolyExpr operator*(const PolyExpr& a, const PolyExpr& b);
  PolyExpr scaled(const Rational& c) const;
  PolyExpr pow(int e) const;

  bool operator==(const PolyExpr& o) const {
    return num_vars_ == o.num_vars_ && terms_ == o.terms_;
  }

  Rational eval(const RatVec& point) const;

  /// Exact formal partial derivative with respect to variable `var`.
  PolyExpr partial(int var) const;

  /// Substitute values[i] for variable i. All values share a variable count,
  /// which becomes the variable count of the result.
  PolyExpr substitute(std::span<const PolyExpr> values) const;

  /// Exact division by variable `var`; requires every term to contain it.
  PolyExpr divide_by_variable(int var) const;

  /// D^alpha p evaluated at 0, i.e. alpha! * coeff(alpha).
  Rational derivative_at_zero(const Exponents& alpha) const;

  /// Canonical printable form; parse_poly(to_string()) reproduces *this.
  std::string to_string() const;

private:
  int num_vars_;
  TermMap terms_;
};

/// Parse the expression grammar: variables x0..x{n-1}, integer and rational
/// literals, + - * ^ and parentheses. Precedence ^ > unary minus > * > + -,
/// left associative, no implicit multiplication.
/// Throws CalcError(Syntax) with a character position on bad input.
PolyExpr parse_poly(const std::string& text, int num_vars);

}  // namespace tdsc
