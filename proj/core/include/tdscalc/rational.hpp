#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdsc {

/// Exact arbitrary-precision rational scalar. Every algebraic identity in
/// this library is checked with these, so equality means equality.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using RatVec = std::vector<Rational>;

/// Error kinds map onto the CLI exit-code table (schema -> 2, domain -> 3).
enum class ErrorKind { Syntax, Dimension, Domain, Contract, Schema };

class CalcError : public std::runtime_error {
public:
  CalcError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact conversion; every finite double is a dyadic rational.
inline Rational rational_from_double(double x) { return Rational(x); }

inline std::string rational_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Accepts "7", "-3/4", "12/8" (reduced on construction).
inline Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw CalcError(ErrorKind::Schema, "rational with zero denominator: " + s);
    return Rational(num, den);
  } catch (const std::exception& e) {
    throw CalcError(ErrorKind::Schema, "bad rational literal '" + s + "': " + e.what());
  }
}

inline Rational abs_val(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// Tolerance-aware comparison: exact when tol == 0.
inline bool close(const Rational& a, const Rational& b, const Rational& tol) {
  if (tol == 0) return a == b;
  return abs_val(a - b) <= tol;
}

inline bool close_vec(const RatVec& a, const RatVec& b, const Rational& tol) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!close(a[i], b[i], tol)) return false;
  return true;
}

}  // namespace tdsc
