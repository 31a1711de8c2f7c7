#pragma once

#include "tdscalc/exterior.hpp"
#include "tdscalc/smooth_map.hpp"

namespace tdsc {

/// Vector field on a box: components b_j of sum_j b_j d/dx_j.
struct VectorFieldOnBox {
  Box domain;
  std::vector<PolyExpr> components;

  VectorFieldOnBox() = default;
  VectorFieldOnBox(Box d, std::vector<PolyExpr> comps);

  int dim() const { return domain.dim; }
  RatVec eval(const RatVec& x) const;
  static VectorFieldOnBox coordinate(int dim, int j);  // d/dx_j
  VectorFieldOnBox scaled_by(const PolyExpr& f) const;
  VectorFieldOnBox operator+(const VectorFieldOnBox& o) const;
};

/// Differential k-form on an open box: one PolyExpr coefficient per
/// increasing multi-index. eval_at produces the exterior form at a point.
class DifferentialForm {
public:
  DifferentialForm() = default;
  DifferentialForm(Box domain, int degree);

  static DifferentialForm basis(Box domain, const MultiIndex& index);  // dx_I
  static DifferentialForm from_function(Box domain, const PolyExpr& f);  // degree 0

  const Box& domain() const { return domain_; }
  int dim() const { return domain_.dim; }
  int degree() const { return degree_; }
  const std::map<MultiIndex, PolyExpr>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  PolyExpr coeff(const MultiIndex& i) const;
  void add_coeff(const MultiIndex& i, const PolyExpr& c);

  ExteriorForm eval_at(const RatVec& x) const;

  DifferentialForm& operator+=(const DifferentialForm& o);
  friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) {
    return a += b;
  }
  DifferentialForm operator-() const { return scaled(PolyExpr::constant(dim(), -1)); }
  friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) {
    return a += -b;
  }
  /// Module structure over smooth functions: f * omega.
  DifferentialForm scaled(const PolyExpr& f) const;
  DifferentialForm scaled(const Rational& c) const;

  bool operator==(const DifferentialForm& o) const {
    return degree_ == o.degree_ && dim() == o.dim() && coeffs_ == o.coeffs_;
  }

private:
  Box domain_;
  int degree_ = 0;
  std::map<MultiIndex, PolyExpr> coeffs_;
};

/// x -> omega_x(xi_1(x), ..., xi_k(x)) as an exact polynomial.
PolyExpr apply_to_fields(const DifferentialForm& omega,
                         std::span<const VectorFieldOnBox> fields);

/// Pointwise wedge; coefficients by formal multiplication.
DifferentialForm wedge_forms(const DifferentialForm& a, const DifferentialForm& b);

/// f^* omega for polynomial f with codomain dimension = omega's dimension:
/// sum_I (a_I o f) df_{i1} ^ ... ^ df_{ik}, all exact.
DifferentialForm pullback_smooth(const SmoothMap& f, const DifferentialForm& omega);

/// d omega = sum_I sum_j (d a_I / d x_j) dx_j ^ dx_I.
DifferentialForm exterior_derivative(const DifferentialForm& omega);

/// df = sum_j (df/dx_j) dx_j on the given box.
DifferentialForm differential_of_function(Box domain, const PolyExpr& f);

/// Field eta with omega(xi) = xi^T g eta for a constant symmetric positive
/// definite metric g; the gradient construction when omega = df.
VectorFieldOnBox metric_dual(const DifferentialForm& omega, const RatMat& g);

}  // namespace tdsc
