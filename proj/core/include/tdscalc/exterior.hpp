#pragma once

#include <compare>
#include <map>
#include <span>

#include "tdscalc/linalg.hpp"

namespace tdsc {

/// Strictly increasing tuple of 0-based coordinate indices; the label of a
/// basis form x_{i1} ^ ... ^ x_{ik}.
struct MultiIndex {
  std::vector<int> idx;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> v);

  int size() const { return (int)idx.size(); }
  auto operator<=>(const MultiIndex&) const = default;

  /// All increasing k-tuples over {0..dim-1}, lexicographic.
  static std::vector<MultiIndex> all(int dim, int k);
};

/// Sign of merging two disjoint increasing tuples into one increasing tuple;
/// 0 when they share an index. `out` receives the merged tuple.
int merge_sign(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out);

/// Alternating k-linear form on R^dim, stored as exact coefficients over the
/// increasing multi-index basis. Degree 0 forms are scalars (single
/// coefficient at the empty index). Any form of degree > dim is zero.
class ExteriorForm {
public:
  ExteriorForm() = default;
  ExteriorForm(int dim, int degree);

  static ExteriorForm scalar(int dim, const Rational& c);
  static ExteriorForm basis(int dim, const MultiIndex& index);
  /// Degree-1 form xi -> <xi, y>.
  static ExteriorForm covector(const RatVec& y);
  /// Top form: the oriented volume of the argument parallelepiped.
  static ExteriorForm volume(int dim);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const std::map<MultiIndex, Rational>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  Rational coeff(const MultiIndex& i) const;
  void add_coeff(const MultiIndex& i, const Rational& c);

  /// Value on exactly `degree` vectors of length `dim`:
  /// sum_I c_I det(rows picked by I).
  Rational evaluate(std::span<const RatVec> vectors) const;

  /// Components of a degree-1 form as a vector (the dual view).
  RatVec covector_components() const;

  ExteriorForm& operator+=(const ExteriorForm& o);
  friend ExteriorForm operator+(ExteriorForm a, const ExteriorForm& b) { return a += b; }
  ExteriorForm scaled(const Rational& c) const;
  ExteriorForm operator-() const { return scaled(-1); }
  bool operator==(const ExteriorForm& o) const = default;

private:
  int dim_ = 0;
  int degree_ = 0;
  std::map<MultiIndex, Rational> coeffs_;
};

/// Multi-index merge with permutation sign. Degree adds; beyond dim the
/// result collapses to zero.
ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b);

/// det(omega_j(xi_i)) for k covectors against k vectors.
Rational decomposable_eval(std::span<const RatVec> covectors, std::span<const RatVec> vectors);

/// Oriented k-volume of the projection onto span(basis); requires an exactly
/// orthonormal rational basis.
ExteriorForm projection_volume_form(int dim, const std::vector<RatVec>& basis);

/// (L^* omega)(v...) = omega(L v...). L has omega.dim() rows; the result
/// lives on a space of dimension = columns of L.
ExteriorForm pullback_linear(const RatMat& l, const ExteriorForm& omega);

}  // namespace tdsc
