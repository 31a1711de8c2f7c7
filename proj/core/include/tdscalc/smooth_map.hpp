#pragma once

#include <functional>
#include <optional>

#include "tdscalc/linalg.hpp"
#include "tdscalc/poly.hpp"

namespace tdsc {

/// Open axis-aligned box, or the whole space when unbounded.
struct Box {
  int dim = 0;
  bool bounded = false;
  RatVec lo, hi;

  static Box whole(int dim) { return Box{dim, false, {}, {}}; }
  static Box centered(int dim, const Rational& half_width);
  static Box bounds(RatVec lo, RatVec hi);

  bool contains(const RatVec& p) const;
  bool contains_box(const Box& inner) const;  // strict containment
};

/// Opaque evaluation rule for the non-polynomial escape hatch. Derivatives
/// come from 5-point central differences with the given step.
struct BlackBoxFn {
  std::function<std::vector<double>(const std::vector<double>&)> fn;
  double step = 1e-4;
  std::string name = "blackbox";
};

/// A smooth map between boxes: a list of polynomial components, or a
/// black-box rule. The representation of "smooth" for the whole library.
///
/// Composition is formal substitution, so containment of the intermediate
/// point in the outer map's box cannot be decided eagerly (polynomial images
/// of boxes are not boxes); composites carry the outer boxes as intermediate
/// checks enforced lazily by eval().
class SmoothMap {
public:
  /// An inner map whose value must stay inside `required` when evaluating.
  struct IntermediateCheck {
    std::vector<PolyExpr> inner;
    Box required;
  };

  SmoothMap() = default;
  SmoothMap(Box domain, std::vector<PolyExpr> components);
  SmoothMap(Box domain, int target_dim, BlackBoxFn blackbox);

  static SmoothMap identity(int n);
  static SmoothMap constant(Box domain, RatVec value);
  /// x -> A x + b.
  static SmoothMap linear(const RatMat& a, RatVec offset = {});

  const Box& domain() const { return domain_; }
  int source_dim() const { return domain_.dim; }
  int target_dim() const { return target_dim_; }
  bool is_polynomial() const { return !blackbox_.has_value(); }
  const std::vector<PolyExpr>& components() const;
  const BlackBoxFn& blackbox() const;
  double fd_step() const { return blackbox_ ? blackbox_->step : 1e-4; }

  /// Exact in polynomial mode; black-box doubles are converted exactly.
  RatVec eval(const RatVec& point) const;
  std::vector<double> eval_d(const std::vector<double>& point) const;

  /// Entry (i, j) = d component_i / d x_j at `point`.
  RatMat jacobian(const RatVec& point) const;

  bool is_constant_map() const;

  const std::vector<IntermediateCheck>& intermediate_checks() const {
    return intermediate_checks_;
  }
  void add_intermediate_check(IntermediateCheck check);

private:
  Box domain_;
  int target_dim_ = 0;
  std::vector<PolyExpr> components_;
  std::optional<BlackBoxFn> blackbox_;
  std::vector<IntermediateCheck> intermediate_checks_;
};

/// f after g. Polynomial composition is formal substitution; any black-box
/// participant yields a black-box composite. Domain containment of the
/// intermediate point is checked lazily at evaluation time.
SmoothMap compose(const SmoothMap& f, const SmoothMap& g);

/// All partial derivatives at the origin up to `order`, per component.
/// `exact` is true in polynomial mode; black-box jets carry finite-difference
/// values and should be compared with a tolerance (1e-6 by convention).
struct Jet {
  int source_dim = 0;
  int target_dim = 0;
  int order = 0;
  bool exact = true;
  // multi-index (length source_dim, |alpha| <= order) -> per-component value
  std::map<std::vector<int>, RatVec> coeffs;

  const RatVec& value() const;        // alpha = 0
  RatVec first_derivative(int var) const;
};

Jet jet_at_zero(const SmoothMap& f, int order);

/// Exact equality when both jets are exact and tol == 0 is requested;
/// otherwise componentwise within tol.
bool jets_match(const Jet& a, const Jet& b, const Rational& tol);

/// Multi-indices of total order <= order over `dim` variables, sorted.
std::vector<std::vector<int>> multi_indices_up_to(int dim, int order);

/// Taylor polynomial of the jet around 0 (component `comp`).
PolyExpr jet_taylor(const Jet& jet, int comp);

}  // namespace tdsc
