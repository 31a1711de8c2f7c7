#pragma once

#include "tdscalc/diffeology.hpp"

namespace tdsc {

/// Pointwise k-form on a space: an exterior form on the ambient signature
/// space at every point, with an optional polynomial witness (an ambient
/// differential form whose eval_at realizes the rule: the smoothness
/// certificate used for exact computations).
struct PointwiseForm {
  int ambient_dim = 0;
  int degree = 0;
  std::function<ExteriorForm(const RatVec&)> at;
  std::optional<DifferentialForm> witness;

  static PointwiseForm from_differential(const DifferentialForm& w);
  PointwiseForm scaled_by(const PolyExpr& f) const;
  PointwiseForm operator+(const PointwiseForm& o) const;
};

/// Plaque-indexed k-form: a rule assigning a differential form on the plaque
/// domain to every (polynomial) plaque. Intensional: defined by its rule,
/// checked by sampling.
struct PlaqueIndexedForm {
  int ambient_dim = 0;
  int degree = 0;
  std::function<DifferentialForm(const SmoothMap&)> assign;
};

struct CheckOutcome {
  bool pass = true;
  std::string witness;
};

/// Compatibility (reparameterization) law: the form assigned to p o phi must
/// equal the pullback along phi of the form assigned to p, exactly.
CheckOutcome compatibility_check(const PlaqueIndexedForm& omega, const SmoothMap& p,
                                 const SmoothMap& phi);

/// The tangent condition: two plaques through the same point, tangent along
/// directions v_1..v_k, must agree on the assigned form values at their base
/// parameters and on the exterior-derivative values extended by v_{k+1}.
/// Errors when the plaques are not tangent along the given directions.
CheckOutcome tangent_condition_check(const DiffSpace& x, const PlaqueIndexedForm& omega,
                                     const SmoothMap& p1, const RatVec& r1,
                                     const SmoothMap& p2, const RatVec& r2,
                                     const std::vector<RatVec>& dirs, const RatVec& extra);

/// The conversion map: omega -> (p^* omega)_p. Requires a polynomial witness
/// and a fixture attested free of transverse points.
PlaqueIndexedForm psi(const DiffSpace& x, const PointwiseForm& omega);

class NoSpanningPlaqueError : public CalcError {
public:
  explicit NoSpanningPlaqueError(const std::string& what)
      : CalcError(ErrorKind::Domain, "NoSpanningPlaque: " + what) {}
};

/// Constructive inverse at a point: build a spanning plaque p with
/// [p(t e_i)] = directions[i] by iterated joint-plaque probes, then read off
/// the assigned form at 0 on the standard basis. The value is checked to be
/// independent of the spanning plaque whenever two distinct ones are found.
/// Throws NoSpanningPlaqueError exactly when the probe hits the
/// transversality obstruction.
Rational psi_inverse_at(const DiffSpace& x, const PlaqueIndexedForm& omega, const RatVec& f,
                        const std::vector<RatVec>& directions);

/// Algebraic (module-multilinear) k-form on R^n, represented by its values
/// on the coordinate frame and extended by smooth-function linearity.
struct CoordinateFrameForm {
  DifferentialForm frame_values;

  int dim() const { return frame_values.dim(); }
  int degree() const { return frame_values.degree(); }
  /// Exact multilinear expansion over the frame decomposition of the fields.
  PolyExpr apply(std::span<const VectorFieldOnBox> fields) const;
};

/// The pointwise-to-algebraic embedding on a Euclidean fixture (requires a
/// polynomial witness).
CoordinateFrameForm pointwise_to_algebraic(const PointwiseForm& omega);

/// The free-module direction: an algebraic form determines a unique
/// pointwise form agreeing with it everywhere.
PointwiseForm algebraic_to_pointwise(const CoordinateFrameForm& omega);

/// Functions and fields on the union-of-axes fixture, recorded per branch.
/// Functions agree at the origin; fields vanish there (their two branch
/// values must coincide inside the glued tangent space).
struct AxesFunction {
  PolyExpr on_x, on_y;  // one-variable polynomials, on_x(0) == on_y(0)

  Rational eval(const RatVec& p) const;
};

struct AxesField {
  PolyExpr on_x, on_y;  // one-variable, vanishing at 0

  AxesField() : on_x(1), on_y(1) {}
  AxesField(PolyExpr fx, PolyExpr fy);
  RatVec ambient_value(const RatVec& p) const;  // (f1(x), 0) or (0, f2(y))
  SpaceVectorField as_space_field(const DiffSpace& axes) const;
};

/// Algebraic 1-form on the axes union built from branch weights:
/// omega(h1 xi1 + h2 xi2) = h1 A + h2 B, where xi1 = x d/dx, xi2 = y d/dy
/// and the h_i come from the exact division f(t) = t g(t).
struct AxesUnionForm {
  PolyExpr weight_x, weight_y;  // A(x), B(y), one variable each

  AxesFunction apply(const AxesField& field) const;
};

/// The algebraic form with no pointwise preimage, with its evidence.
struct AxesCounterexample {
  AxesUnionForm form;
  AxesField xi1, xi2;              // x d/dx and y d/dy
  Rational value_of_xi1_at_origin; // = 1
  RatVec xi1_signature_at_origin;  // = (0, 0)
};

AxesCounterexample axes_union_counterexample(const DiffSpace& axes);

/// Pullbacks of the three kinds along a smooth map h : X1 -> X2.
PointwiseForm pullback_pointwise(const SmoothMap& h, const PointwiseForm& omega);
PlaqueIndexedForm pullback_plaque_indexed(const SmoothMap& h, const PlaqueIndexedForm& omega);

/// Algebraic pullback needs a surjective differential; the caller supplies a
/// right inverse R with dh R = id, which also selects the section used to
/// push fields forward. Restricted to affine h.
CoordinateFrameForm pullback_algebraic(const SmoothMap& h, const CoordinateFrameForm& omega,
                                       const RatMat& right_inverse);

}  // namespace tdsc
