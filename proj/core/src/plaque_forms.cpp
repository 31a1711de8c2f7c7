#include "tdscalc/plaque_forms.hpp"

#include <sstream>

namespace tdsc {

namespace {

std::string vec_str(const RatVec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << rational_to_string(v[i]);
  }
  os << ")";
  return os.str();
}

}  // namespace

PointwiseForm PointwiseForm::from_differential(const DifferentialForm& w) {
  PointwiseForm out;
  out.ambient_dim = w.dim();
  out.degree = w.degree();
  out.witness = w;
  out.at = [w](const RatVec& f) { return w.eval_at(f); };
  return out;
}

PointwiseForm PointwiseForm::scaled_by(const PolyExpr& f) const {
  if (!witness)
    throw CalcError(ErrorKind::Contract, "scaling needs a polynomial witness");
  return from_differential(witness->scaled(f));
}

PointwiseForm PointwiseForm::operator+(const PointwiseForm& o) const {
  if (!witness || !o.witness)
    throw CalcError(ErrorKind::Contract, "sum needs polynomial witnesses");
  return from_differential(*witness + *o.witness);
}

CheckOutcome compatibility_check(const PlaqueIndexedForm& omega, const SmoothMap& p,
                                 const SmoothMap& phi) {
  if (phi.target_dim() != p.source_dim())
    throw CalcError(ErrorKind::Dimension, "phi codomain != plaque arity");
  if (p.domain().bounded && phi.is_polynomial()) {
    // A bounded plaque domain must contain the image of phi's box; checked at
    // the sample points used below, lazily.
    RatVec probe = phi.eval(RatVec(phi.source_dim(), 0));
    if (!p.domain().contains(probe))
      throw CalcError(ErrorKind::Domain, "phi image escapes the plaque domain");
  }
  DifferentialForm lhs = omega.assign(compose(p, phi));
  DifferentialForm rhs = pullback_smooth(phi, omega.assign(p));
  if (lhs == rhs) return {true, ""};
  // report one differing coefficient
  for (const auto& [idx, c] : rhs.coeffs()) {
    if (!(lhs.coeff(idx) == c)) {
      std::ostringstream os;
      os << "coefficient at index (";
      for (size_t i = 0; i < idx.idx.size(); ++i)
        os << (i ? "," : "") << idx.idx[i];
      os << "): assigned " << lhs.coeff(idx).to_string() << " vs pulled back " << c.to_string();
      return {false, os.str()};
    }
  }
  for (const auto& [idx, c] : lhs.coeffs()) {
    if (!(rhs.coeff(idx) == c)) {
      std::ostringstream os;
      os << "extra coefficient in assigned form at (";
      for (size_t i = 0; i < idx.idx.size(); ++i)
        os << (i ? "," : "") << idx.idx[i];
      os << ")";
      return {false, os.str()};
    }
  }
  return {false, "forms differ"};
}

CheckOutcome tangent_condition_check(const DiffSpace& x, const PlaqueIndexedForm& omega,
                                     const SmoothMap& p1, const RatVec& r1,
                                     const SmoothMap& p2, const RatVec& r2,
                                     const std::vector<RatVec>& dirs, const RatVec& extra) {
  int n = p1.source_dim();
  if (p2.source_dim() != n)
    throw CalcError(ErrorKind::Dimension, "tangent pairs need equal plaque arity");
  RatVec f1 = p1.eval(r1), f2 = p2.eval(r2);
  if (!close_vec(f1, f2, x.tol))
    throw CalcError(ErrorKind::Domain, "plaques do not meet: " + vec_str(f1) + " vs " +
                                           vec_str(f2));
  // Precondition: tangency along every direction.
  for (size_t i = 0; i < dirs.size(); ++i) {
    SmoothMap c1 = plaque_ray(p1, r1, dirs[i]);
    SmoothMap c2 = plaque_ray(p2, r2, dirs[i]);
    bool same = true;
    for (const auto& gen : x.generators) {
      SmoothMap gm(Box::whole(x.ambient_dim), std::vector<PolyExpr>{gen});
      if (!jets_match(jet_at_zero(compose(gm, c1), 1), jet_at_zero(compose(gm, c2), 1), x.tol))
        same = false;
    }
    if (!same)
      throw CalcError(ErrorKind::Domain,
                      "plaques are not tangent along direction " + std::to_string(i));
  }
  DifferentialForm w1 = omega.assign(p1);
  DifferentialForm w2 = omega.assign(p2);
  Rational v1 = w1.eval_at(r1).evaluate(dirs);
  Rational v2 = w2.eval_at(r2).evaluate(dirs);
  if (!close(v1, v2, x.tol))
    return {false, "form values differ: " + rational_to_string(v1) + " vs " +
                       rational_to_string(v2)};
  std::vector<RatVec> extended = dirs;
  extended.push_back(extra);
  Rational d1 = exterior_derivative(w1).eval_at(r1).evaluate(extended);
  Rational d2 = exterior_derivative(w2).eval_at(r2).evaluate(extended);
  if (!close(d1, d2, x.tol))
    return {false, "exterior derivative values differ: " + rational_to_string(d1) + " vs " +
                       rational_to_string(d2)};
  return {true, ""};
}

PlaqueIndexedForm psi(const DiffSpace& x, const PointwiseForm& omega) {
  if (x.has_transverse_points)
    throw CalcError(ErrorKind::Domain,
                    "psi refused: fixture '" + x.name + "' has transverse points");
  if (omega.ambient_dim != x.ambient_dim)
    throw CalcError(ErrorKind::Dimension, "form dimension != ambient dimension");
  if (!omega.witness)
    throw CalcError(ErrorKind::Contract,
                    "psi requires a pointwise form with a polynomial witness");
  DifferentialForm w = *omega.witness;
  PlaqueIndexedForm out;
  out.ambient_dim = x.ambient_dim;
  out.degree = omega.degree;
  out.assign = [w](const SmoothMap& p) { return pullback_smooth(p, w); };
  return out;
}

Rational psi_inverse_at(const DiffSpace& x, const PlaqueIndexedForm& omega, const RatVec& f,
                        const std::vector<RatVec>& directions) {
  int k = (int)directions.size();
  if (k == 0) {
    // Degree-0 forms are functions; read the value off a constant plaque.
    SmoothMap c = SmoothMap::constant(Box::whole(1), f);
    return omega.assign(c).coeff(MultiIndex{}).eval(RatVec{0});
  }
  bool all_zero = true;
  for (const auto& d : directions)
    for (const auto& c : d)
      if (c != 0) all_zero = false;
  auto spanning = build_spanning_plaques(x, f, directions);
  if (spanning.empty()) {
    if (all_zero) return 0;  // alternation/linearity force the value
    throw NoSpanningPlaqueError(
        "no plaque spans the requested directions at " + vec_str(f) +
        " (transversality obstruction on fixture '" + x.name + "')");
  }
  std::vector<RatVec> basis;
  for (int i = 0; i < k; ++i) {
    RatVec e(k, 0);
    e[i] = 1;
    basis.push_back(std::move(e));
  }
  std::optional<Rational> value;
  for (const auto& q : spanning) {
    Rational v = omega.assign(q).eval_at(RatVec(k, 0)).evaluate(basis);
    if (!value)
      value = v;
    else if (!close(*value, v, x.tol))
      throw CalcError(ErrorKind::Contract,
                      "value depends on the spanning plaque (tangent condition violated): " +
                          rational_to_string(*value) + " vs " + rational_to_string(v));
  }
  return *value;
}

PolyExpr CoordinateFrameForm::apply(std::span<const VectorFieldOnBox> fields) const {
  return apply_to_fields(frame_values, fields);
}

CoordinateFrameForm pointwise_to_algebraic(const PointwiseForm& omega) {
  if (!omega.witness)
    throw CalcError(ErrorKind::Contract,
                    "pointwise form needs a polynomial witness on a Euclidean fixture");
  return CoordinateFrameForm{*omega.witness};
}

PointwiseForm algebraic_to_pointwise(const CoordinateFrameForm& omega) {
  return PointwiseForm::from_differential(omega.frame_values);
}

Rational AxesFunction::eval(const RatVec& p) const {
  if (p.size() != 2) throw CalcError(ErrorKind::Dimension, "axes point has dimension 2");
  if (p[1] == 0) return on_x.eval(RatVec{p[0]});
  if (p[0] == 0) return on_y.eval(RatVec{p[1]});
  throw CalcError(ErrorKind::Domain, "point not on the axes union");
}

AxesField::AxesField(PolyExpr fx, PolyExpr fy) : on_x(std::move(fx)), on_y(std::move(fy)) {
  if (on_x.num_vars() != 1 || on_y.num_vars() != 1)
    throw CalcError(ErrorKind::Contract, "axes field components are one-variable");
  if (on_x.constant_term() != 0 || on_y.constant_term() != 0)
    throw CalcError(ErrorKind::Contract,
                    "axes fields vanish at the origin (the glued tangent space forces it)");
}

RatVec AxesField::ambient_value(const RatVec& p) const {
  if (p[1] == 0) return {on_x.eval(RatVec{p[0]}), 0};
  if (p[0] == 0) return {0, on_y.eval(RatVec{p[1]})};
  throw CalcError(ErrorKind::Domain, "point not on the axes union");
}

SpaceVectorField AxesField::as_space_field(const DiffSpace& axes) const {
  SpaceVectorField field;
  field.name = "axes-field";
  AxesField self = *this;
  field.signature_at = [self](const RatVec& p) { return self.ambient_value(p); };
  field.witness_at = [self](const RatVec& p) {
    RatVec v = self.ambient_value(p);
    RatMat col(2, RatVec(1));
    col[0][0] = v[0];
    col[1][0] = v[1];
    return SmoothMap::linear(col, p);
  };
  (void)axes;
  return field;
}

AxesFunction AxesUnionForm::apply(const AxesField& field) const {
  // f_i(t) = t h_i(t); the division is exact because fields vanish at 0.
  PolyExpr h1 = field.on_x.is_zero() ? PolyExpr(1) : field.on_x.divide_by_variable(0);
  PolyExpr h2 = field.on_y.is_zero() ? PolyExpr(1) : field.on_y.divide_by_variable(0);
  Rational h1_0 = h1.constant_term();
  Rational h2_0 = h2.constant_term();
  AxesFunction out;
  out.on_x = h1 * weight_x + PolyExpr::constant(1, h2_0 * weight_y.constant_term());
  out.on_y = h2 * weight_y + PolyExpr::constant(1, h1_0 * weight_x.constant_term());
  return out;
}

AxesCounterexample axes_union_counterexample(const DiffSpace& axes) {
  AxesCounterexample out;
  // weights (x^2 + 1) and (2 y^2 + 1)
  out.form.weight_x = parse_poly("x0^2 + 1", 1);
  out.form.weight_y = parse_poly("2*x0^2 + 1", 1);
  out.xi1 = AxesField(parse_poly("x0", 1), PolyExpr(1));
  out.xi2 = AxesField(PolyExpr(1), parse_poly("x0", 1));
  AxesFunction of_xi1 = out.form.apply(out.xi1);
  out.value_of_xi1_at_origin = of_xi1.eval(RatVec{0, 0});
  SpaceVectorField sf = out.xi1.as_space_field(axes);
  SmoothMap witness = sf.witness_at(RatVec{0, 0});
  TangentVector tv = tangent_class(axes, witness);
  out.xi1_signature_at_origin = tv.signature;
  return out;
}

PointwiseForm pullback_pointwise(const SmoothMap& h, const PointwiseForm& omega) {
  if (h.target_dim() != omega.ambient_dim)
    throw CalcError(ErrorKind::Dimension, "pullback: map codomain != form dimension");
  PointwiseForm out;
  out.ambient_dim = h.source_dim();
  out.degree = omega.degree;
  PointwiseForm base = omega;
  SmoothMap hh = h;
  out.at = [base, hh](const RatVec& f) {
    return pullback_linear(hh.jacobian(f), base.at(hh.eval(f)));
  };
  if (omega.witness && h.is_polynomial()) out.witness = pullback_smooth(h, *omega.witness);
  return out;
}

PlaqueIndexedForm pullback_plaque_indexed(const SmoothMap& h, const PlaqueIndexedForm& omega) {
  PlaqueIndexedForm out;
  out.ambient_dim = h.source_dim();
  out.degree = omega.degree;
  PlaqueIndexedForm base = omega;
  SmoothMap hh = h;
  // By type the index must be h o p: p is a plaque of the source space.
  out.assign = [base, hh](const SmoothMap& p) { return base.assign(compose(hh, p)); };
  return out;
}

CoordinateFrameForm pullback_algebraic(const SmoothMap& h, const CoordinateFrameForm& omega,
                                       const RatMat& right_inverse) {
  if (!h.is_polynomial())
    throw CalcError(ErrorKind::Contract, "algebraic pullback is restricted to affine maps");
  for (const auto& c : h.components())
    if (c.degree() > 1)
      throw CalcError(ErrorKind::Contract, "algebraic pullback is restricted to affine maps");
  RatVec zero(h.source_dim(), 0);
  RatMat dh = h.jacobian(zero);
  RatMat prod = mat_mul(dh, right_inverse);
  RatMat id = mat_identity(mat_rows(prod));
  if (prod != id)
    throw CalcError(ErrorKind::Domain,
                    "SurjectivityNotWitnessed: supplied matrix is not a right inverse of dh");
  // Push the coordinate frame forward through dh and evaluate along the
  // section x = R y, then compose with h.
  int src = h.source_dim();
  DifferentialForm result(Box::whole(src), omega.degree());
  for (const auto& j : MultiIndex::all(src, omega.degree())) {
    // fields dh(e_{j1}), ..., dh(e_{jk}) are constant vectors on the target.
    std::vector<VectorFieldOnBox> pushed;
    pushed.reserve(omega.degree());
    for (int b = 0; b < omega.degree(); ++b) {
      RatVec col(mat_rows(dh));
      for (size_t r = 0; r < mat_rows(dh); ++r) col[r] = dh[r][j.idx[b]];
      std::vector<PolyExpr> comps;
      for (size_t r = 0; r < mat_rows(dh); ++r)
        comps.push_back(PolyExpr::constant(omega.dim(), col[r]));
      pushed.emplace_back(Box::whole(omega.dim()), std::move(comps));
    }
    PolyExpr value_on_target = omega.apply(pushed);
    result.add_coeff(j, value_on_target.substitute(h.components()));
  }
  return CoordinateFrameForm{result};
}

}  // namespace tdsc
