#include "tdscalc/poly.hpp"

#include <sstream>

namespace tdsc {

PolyExpr PolyExpr::constant(int num_vars, const Rational& c) {
  PolyExpr p(num_vars);
  p.add_term(Exponents(num_vars, 0), c);
  return p;
}

PolyExpr PolyExpr::variable(int num_vars, int index) {
  if (index < 0 || index >= num_vars)
    throw CalcError(ErrorKind::Dimension, "variable index " + std::to_string(index) +
                                              " out of range for " + std::to_string(num_vars) +
                                              " variables");
  Exponents e(num_vars, 0);
  e[index] = 1;
  return monomial(num_vars, std::move(e), 1);
}

PolyExpr PolyExpr::monomial(int num_vars, Exponents exps, const Rational& c) {
  PolyExpr p(num_vars);
  p.add_term(exps, c);
  return p;
}

int PolyExpr::degree() const {
  int deg = -1;  // -1 for the zero polynomial
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int k : e) d += k;
    if (d > deg) deg = d;
  }
  return deg;
}

Rational PolyExpr::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational PolyExpr::constant_term() const { return coeff(Exponents(num_vars_, 0)); }

void PolyExpr::add_term(const Exponents& exps, const Rational& c) {
  if ((int)exps.size() != num_vars_)
    throw CalcError(ErrorKind::Dimension, "exponent vector length mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

PolyExpr PolyExpr::operator-() const {
  PolyExpr out(num_vars_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

PolyExpr& PolyExpr::operator+=(const PolyExpr& o) {
  if (num_vars_ != o.num_vars_)
    throw CalcError(ErrorKind::Dimension, "polynomial variable count mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

PolyExpr& PolyExpr::operator-=(const PolyExpr& o) {
  if (num_vars_ != o.num_vars_)
    throw CalcError(ErrorKind::Dimension, "polynomial variable count mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

PolyExpr operator*(const PolyExpr& a, const PolyExpr& b) {
  if (a.num_vars_ != b.num_vars_)
    throw CalcError(ErrorKind::Dimension, "polynomial variable count mismatch");
  PolyExpr out(a.num_vars_);
  PolyExpr::Exponents e(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.num_vars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

PolyExpr PolyExpr::scaled(const Rational& c) const {
  PolyExpr out(num_vars_);
  if (c == 0) return out;
  for (const auto& [e, v] : terms_) out.terms_.emplace(e, v * c);
  return out;
}

PolyExpr PolyExpr::pow(int e) const {
  if (e < 0) throw CalcError(ErrorKind::Domain, "negative polynomial power");
  PolyExpr out = constant(num_vars_, 1);
  PolyExpr base = *this;
  while (e > 0) {
    if (e & 1) out = out * base;
    base = base * base;
    e >>= 1;
  }
  return out;
}

Rational PolyExpr::eval(const RatVec& point) const {
  if ((int)point.size() != num_vars_)
    throw CalcError(ErrorKind::Dimension, "evaluation point has wrong dimension");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int i = 0; i < num_vars_; ++i) {
      for (int k = 0; k < e[i]; ++k) term *= point[i];
    }
    sum += term;
  }
  return sum;
}

PolyExpr PolyExpr::partial(int var) const {
  if (var < 0 || var >= num_vars_)
    throw CalcError(ErrorKind::Dimension, "partial derivative index out of range");
  PolyExpr out(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    out.add_term(d, c * e[var]);
  }
  return out;
}

PolyExpr PolyExpr::substitute(std::span<const PolyExpr> values) const {
  if ((int)values.size() != num_vars_)
    throw CalcError(ErrorKind::Dimension, "substitution needs one value per variable");
  int out_vars = values.empty() ? 0 : values[0].num_vars();
  for (const auto& v : values)
    if (v.num_vars() != out_vars)
      throw CalcError(ErrorKind::Dimension, "substitution values disagree on variable count");
  PolyExpr out(out_vars);
  for (const auto& [e, c] : terms_) {
    PolyExpr term = PolyExpr::constant(out_vars, c);
    for (int i = 0; i < num_vars_; ++i)
      if (e[i] > 0) term = term * values[i].pow(e[i]);
    out += term;
  }
  return out;
}

PolyExpr PolyExpr::divide_by_variable(int var) const {
  if (var < 0 || var >= num_vars_)
    throw CalcError(ErrorKind::Dimension, "division variable out of range");
  PolyExpr out(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0)
      throw CalcError(ErrorKind::Domain, "exact division fails: term without variable x" +
                                             std::to_string(var));
    Exponents d = e;
    d[var] -= 1;
    out.add_term(d, c);
  }
  return out;
}

Rational PolyExpr::derivative_at_zero(const Exponents& alpha) const {
  if ((int)alpha.size() != num_vars_)
    throw CalcError(ErrorKind::Dimension, "derivative multi-index length mismatch");
  Rational c = coeff(alpha);
  if (c == 0) return 0;
  Rational fact = 1;
  for (int a : alpha)
    for (int k = 2; k <= a; ++k) fact *= k;
  return c * fact;
}

std::string PolyExpr::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool has_vars = false;
    for (int k : e)
      if (k > 0) has_vars = true;
    if (!has_vars) {
      os << rational_to_string(a);
      continue;
    }
    bool lead = true;
    if (a != 1) {
      os << rational_to_string(a);
      lead = false;
    }
    for (int i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      if (!lead) os << "*";
      lead = false;
      os << "x" << i;
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

}  // namespace tdsc
