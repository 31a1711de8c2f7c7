#include "tdscalc/spaces.hpp"

#include <cmath>
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

std::vector<PolyExpr> coordinate_generators(int n) {
  std::vector<PolyExpr> gens;
  gens.reserve(n);
  for (int i = 0; i < n; ++i) gens.push_back(PolyExpr::variable(n, i));
  return gens;
}

SmoothMap line_curve(const RatVec& base, const RatVec& dir) {
  RatMat col(base.size(), RatVec(1));
  for (size_t i = 0; i < base.size(); ++i) col[i][0] = dir[i];
  return SmoothMap::linear(col, base);
}

// t -> base + t dir + t^2 bend
SmoothMap bent_curve(const RatVec& base, const RatVec& dir, const RatVec& bend) {
  int n = (int)base.size();
  std::vector<PolyExpr> comps;
  comps.reserve(n);
  PolyExpr t = PolyExpr::variable(1, 0);
  for (int i = 0; i < n; ++i) {
    PolyExpr c = PolyExpr::constant(1, base[i]);
    c += t.scaled(dir[i]);
    c += t.pow(2).scaled(bend[i]);
    comps.push_back(std::move(c));
  }
  return SmoothMap(Box::whole(1), std::move(comps));
}

// Direction of a polynomial map into the plane whose image lies in a line;
// nullopt when the image is not contained in any single line.
std::optional<RatVec> line_direction(const SmoothMap& p) {
  RatVec base = p.eval(RatVec(p.source_dim(), 0));
  PolyExpr u = p.components()[0] - PolyExpr::constant(p.source_dim(), base[0]);
  PolyExpr v = p.components()[1] - PolyExpr::constant(p.source_dim(), base[1]);
  if (u.is_zero() && v.is_zero()) return RatVec{0, 0};
  if (u.is_zero()) return RatVec{0, 1};
  if (v.is_zero()) return RatVec{1, 0};
  const auto& [e0, c0] = *u.terms().begin();
  Rational lambda = v.coeff(e0) / c0;
  if (v == u.scaled(lambda)) return RatVec{1, lambda};
  return std::nullopt;
}

}  // namespace

DiffSpace make_euclidean(int n) {
  if (n < 1) throw CalcError(ErrorKind::Schema, "euclidean fixture needs dimension >= 1");
  DiffSpace x;
  x.name = "euclidean:" + std::to_string(n);
  x.ambient_dim = n;
  x.generators = coordinate_generators(n);
  x.membership = [](const RatVec&) { return Membership{true, ""}; };
  x.plaque_predicate = [](const SmoothMap&) { return PlaqueDecision{true, ""}; };
  x.curve_family = [n](const RatVec& f, int budget, Sampler& s) {
    std::vector<SmoothMap> out;
    for (int i = 0; i < n && (int)out.size() < budget; ++i) {
      RatVec e(n, 0);
      e[i] = 1;
      out.push_back(line_curve(f, e));
    }
    while ((int)out.size() < budget)
      out.push_back(bent_curve(f, s.nonzero_vector(n, 4, 2), s.vector(n, 2, 2)));
    return out;
  };
  x.plaque_sum = [n](const SmoothMap& p1, const SmoothMap& p2) -> std::optional<SmoothMap> {
    if (!p1.is_polynomial() || !p2.is_polynomial()) return std::nullopt;
    if (p1.source_dim() != p2.source_dim()) return std::nullopt;
    RatVec f = p1.eval(RatVec(p1.source_dim(), 0));
    std::vector<PolyExpr> comps;
    comps.reserve(n);
    for (int i = 0; i < n; ++i) {
      PolyExpr c = p1.components()[i] + p2.components()[i];
      c -= PolyExpr::constant(p1.source_dim(), f[i]);
      comps.push_back(std::move(c));
    }
    return SmoothMap(p1.domain(), std::move(comps));
  };
  x.spanning_plaques = [n](const RatVec& f, const std::vector<RatVec>& dirs) {
    std::vector<SmoothMap> out;
    int k = (int)dirs.size();
    if (k == 0) return out;
    // q(t) = f + sum t_i d_i, plus a variant bent by second-order terms.
    std::vector<PolyExpr> flat, bent;
    for (int i = 0; i < n; ++i) {
      PolyExpr c = PolyExpr::constant(k, f[i]);
      for (int j = 0; j < k; ++j) c += PolyExpr::variable(k, j).scaled(dirs[j][i]);
      flat.push_back(c);
      PolyExpr b = c;
      for (int j = 0; j < k; ++j)
        b += PolyExpr::variable(k, j).pow(2).scaled(Rational(((i + j) % 3) - 1));
      bent.push_back(b);
    }
    out.emplace_back(Box::whole(k), std::move(flat));
    out.emplace_back(Box::whole(k), std::move(bent));
    return out;
  };
  x.sample_members = [n](int count, Sampler& s) {
    std::vector<RatVec> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(s.vector(n, 5, 2));
    return out;
  };
  x.has_transverse_points = false;
  return x;
}

DiffSpace make_axes_union(bool include_origin) {
  DiffSpace x;
  x.name = include_origin ? "axes" : "axes_punctured";
  x.ambient_dim = 2;
  x.generators = coordinate_generators(2);
  x.membership = [include_origin](const RatVec& p) {
    if (p.size() != 2) return Membership{false, ""};
    bool origin = p[0] == 0 && p[1] == 0;
    if (origin) return Membership{include_origin, "origin"};
    if (p[1] == 0) return Membership{true, "x-axis"};
    if (p[0] == 0) return Membership{true, "y-axis"};
    return Membership{false, ""};
  };
  x.plaque_predicate = [include_origin](const SmoothMap& p) {
    if (!p.is_polynomial()) return PlaqueDecision{false, "axes plaques are polynomial"};
    bool on_x = p.components()[1].is_zero();
    bool on_y = p.components()[0].is_zero();
    if (!on_x && !on_y)
      return PlaqueDecision{false, "image leaves both axes"};
    if (!include_origin) {
      // sampled origin avoidance on the (bounded) domain
      Rational half = p.domain().bounded ? p.domain().hi[0] : Rational(1, 4);
      for (int num : {0, 1, -1, 2, -2, 3, -3}) {
        RatVec t{half * Rational(num, 4)};
        if (!p.domain().contains(t)) continue;
        RatVec v = p.eval(t);
        if (v[0] == 0 && v[1] == 0)
          return PlaqueDecision{false, "image meets the excluded origin"};
      }
    }
    return PlaqueDecision{true, ""};
  };
  // Keep curve domains small enough that the image never crosses the origin
  // (required for the punctured variant; harmless otherwise).
  auto safe_curve = [](const RatVec& f, const RatVec& dir, const RatVec& bend) {
    Rational base = abs_val(f[0]) + abs_val(f[1]);
    Rational motion = abs_val(dir[0]) + abs_val(dir[1]) + abs_val(bend[0]) + abs_val(bend[1]);
    Rational half(1, 4);
    if (base != 0 && motion != 0) {
      Rational guard = base / (4 * (motion + 1));
      if (guard < half) half = guard;
    }
    SmoothMap c = bent_curve(f, dir, bend);
    return SmoothMap(Box::centered(1, half), c.components());
  };
  x.curve_family = [safe_curve](const RatVec& f, int budget, Sampler& s) {
    std::vector<SmoothMap> out;
    bool origin = f[0] == 0 && f[1] == 0;
    auto push_axis = [&](int axis) {
      Rational v = s.nonzero_rational(4, 2);
      RatVec dir{0, 0}, bend{0, 0};
      dir[axis] = v;
      bend[axis] = s.rational(2, 2);
      out.push_back(safe_curve(f, dir, bend));
    };
    if (origin) {
      while ((int)out.size() < budget) {
        push_axis(0);
        if ((int)out.size() < budget) push_axis(1);
      }
    } else {
      int axis = f[1] == 0 ? 0 : 1;
      while ((int)out.size() < budget) push_axis(axis);
    }
    return out;
  };
  x.plaque_sum = [](const SmoothMap& p1, const SmoothMap& p2) -> std::optional<SmoothMap> {
    bool on_x1 = p1.components()[1].is_zero(), on_x2 = p2.components()[1].is_zero();
    bool on_y1 = p1.components()[0].is_zero(), on_y2 = p2.components()[0].is_zero();
    RatVec f = p1.eval(RatVec(p1.source_dim(), 0));
    std::vector<PolyExpr> comps(2, PolyExpr(p1.source_dim()));
    if (on_x1 && on_x2) {
      comps[0] = p1.components()[0] + p2.components()[0] -
                 PolyExpr::constant(p1.source_dim(), f[0]);
      return SmoothMap(p1.domain(), std::move(comps));
    }
    if (on_y1 && on_y2) {
      comps[1] = p1.components()[1] + p2.components()[1] -
                 PolyExpr::constant(p1.source_dim(), f[1]);
      return SmoothMap(p1.domain(), std::move(comps));
    }
    return std::nullopt;  // cross-branch sums are not realizable
  };
  x.joint_obstruction = [](const SmoothMap& p1, const SmoothMap& p2,
                           JointMode) -> std::optional<ProbeCertificate> {
    if (!p1.is_polynomial() || !p2.is_polynomial()) return std::nullopt;
    bool x1 = p1.components()[1].is_zero() && !p1.components()[0].is_zero();
    bool y1 = p1.components()[0].is_zero() && !p1.components()[1].is_zero();
    bool x2 = p2.components()[1].is_zero() && !p2.components()[0].is_zero();
    bool y2 = p2.components()[0].is_zero() && !p2.components()[1].is_zero();
    bool nonconst1 = p1.components()[0].degree() > 0 || p1.components()[1].degree() > 0;
    bool nonconst2 = p2.components()[0].degree() > 0 || p2.components()[1].degree() > 0;
    if (nonconst1 && nonconst2 && ((x1 && y2) || (y1 && x2)))
      return ProbeCertificate{
          "axes-branch-obstruction",
          "a joint plaque's image lies in a single axis, but the boundary traces span "
          "both axes through the origin"};
    return std::nullopt;
  };
  x.spanning_plaques = [safe_curve](const RatVec& f, const std::vector<RatVec>& dirs) {
    std::vector<SmoothMap> out;
    if (dirs.size() != 1) return out;  // branches are one-dimensional
    const RatVec& d = dirs[0];
    bool origin = f[0] == 0 && f[1] == 0;
    bool x_ok = (origin || f[1] == 0) && d[1] == 0;
    bool y_ok = (origin || f[0] == 0) && d[0] == 0;
    if (d[0] == 0 && d[1] == 0) {
      out.push_back(SmoothMap::constant(Box::whole(1), f));
      return out;
    }
    if (x_ok) {
      out.push_back(safe_curve(f, d, RatVec{0, 0}));
      out.push_back(safe_curve(f, d, RatVec{1, 0}));
    } else if (y_ok) {
      out.push_back(safe_curve(f, d, RatVec{0, 0}));
      out.push_back(safe_curve(f, d, RatVec{0, 1}));
    }
    return out;
  };
  x.sample_members = [include_origin](int count, Sampler& s) {
    std::vector<RatVec> out;
    for (int i = 0; i < count; ++i) {
      Rational v = include_origin && i == 0 ? Rational(0) : s.nonzero_rational(5, 2);
      if (i % 2 == 0)
        out.push_back(RatVec{v, 0});
      else
        out.push_back(RatVec{0, v});
    }
    return out;
  };
  x.has_transverse_points = include_origin;
  return x;
}

DiffSpace make_lines_plane() {
  DiffSpace x;
  x.name = "lines";
  x.ambient_dim = 2;
  x.generators = coordinate_generators(2);
  x.membership = [](const RatVec& p) { return Membership{p.size() == 2, ""}; };
  x.plaque_predicate = [](const SmoothMap& p) {
    if (!p.is_polynomial())
      return PlaqueDecision{false, "line plaques are polynomial"};
    if (line_direction(p)) return PlaqueDecision{true, ""};
    return PlaqueDecision{false, "image is not contained in a single line"};
  };
  x.curve_family = [](const RatVec& f, int budget, Sampler& s) {
    std::vector<SmoothMap> out;
    std::vector<RatVec> dirs{{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    for (const auto& d : dirs)
      if ((int)out.size() < budget) out.push_back(line_curve(f, d));
    while ((int)out.size() < budget) {
      RatVec d = s.nonzero_vector(2, 4, 2);
      Rational bend = s.rational(2, 2);
      RatVec b{d[0] * bend, d[1] * bend};  // second-order motion along the same line
      out.push_back(bent_curve(f, d, b));
    }
    return out;
  };
  x.plaque_sum = [](const SmoothMap& p1, const SmoothMap& p2) -> std::optional<SmoothMap> {
    if (p1.source_dim() != 1 || p2.source_dim() != 1) return std::nullopt;
    RatVec f = p1.eval(RatVec{0});
    RatVec s1{p1.components()[0].partial(0).eval(RatVec{0}),
              p1.components()[1].partial(0).eval(RatVec{0})};
    RatVec s2{p2.components()[0].partial(0).eval(RatVec{0}),
              p2.components()[1].partial(0).eval(RatVec{0})};
    return line_curve(f, RatVec{s1[0] + s2[0], s1[1] + s2[1]});
  };
  x.joint_obstruction = [](const SmoothMap& p1, const SmoothMap& p2,
                           JointMode) -> std::optional<ProbeCertificate> {
    if (!p1.is_polynomial() || !p2.is_polynomial()) return std::nullopt;
    auto d1 = line_direction(p1), d2 = line_direction(p2);
    if (!d1 || !d2) return std::nullopt;
    bool z1 = (*d1)[0] == 0 && (*d1)[1] == 0, z2 = (*d2)[0] == 0 && (*d2)[1] == 0;
    if (z1 || z2) return std::nullopt;
    Rational det = (*d1)[0] * (*d2)[1] - (*d1)[1] * (*d2)[0];
    if (det != 0)
      return ProbeCertificate{
          "line-direction-obstruction",
          "a joint plaque's image must lie in a single line; the boundary traces run along "
          "independent directions " +
              vec_str(*d1) + " and " + vec_str(*d2) +
              " - strongly transverse of degree (" + std::to_string(p1.source_dim()) + "," +
              std::to_string(p2.source_dim()) + ")"};
    return std::nullopt;
  };
  x.spanning_plaques = [](const RatVec& f, const std::vector<RatVec>& dirs) {
    std::vector<SmoothMap> out;
    if (dirs.empty()) return out;
    // All directions must be parallel for the image to stay in one line.
    RatVec ref = dirs[0];
    for (const auto& d : dirs) {
      if (d[0] == 0 && d[1] == 0) continue;
      if (ref[0] == 0 && ref[1] == 0) ref = d;
      if (!(d[0] * ref[1] - d[1] * ref[0] == 0)) return out;
    }
    int k = (int)dirs.size();
    if (ref[0] == 0 && ref[1] == 0) {
      out.push_back(SmoothMap::constant(Box::whole(k), f));
      return out;
    }
    std::vector<PolyExpr> comps;
    for (int i = 0; i < 2; ++i) {
      PolyExpr c = PolyExpr::constant(k, f[i]);
      for (int j = 0; j < k; ++j) c += PolyExpr::variable(k, j).scaled(dirs[j][i]);
      comps.push_back(std::move(c));
    }
    out.emplace_back(Box::whole(k), std::move(comps));
    return out;
  };
  x.sample_members = [](int count, Sampler& s) {
    std::vector<RatVec> out;
    for (int i = 0; i < count; ++i) out.push_back(s.vector(2, 5, 2));
    return out;
  };
  x.has_transverse_points = true;
  return x;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// Black-box plaque running inside the parallel of F with the given angular
// velocity: t -> R_z(w t + w2 t^2) F.
SmoothMap parallel_curve(const RatVec& f, double w, double w2) {
  double fx = to_double(f[0]), fy = to_double(f[1]), fz = to_double(f[2]);
  BlackBoxFn bb;
  bb.name = "parallel-curve";
  bb.fn = [fx, fy, fz, w, w2](const std::vector<double>& t) {
    double a = w * t[0] + w2 * t[0] * t[0];
    double c = std::cos(a), s = std::sin(a);
    return std::vector<double>{c * fx - s * fy, s * fx + c * fy, fz};
  };
  return SmoothMap(Box::centered(1, Rational(1, 2)), 3, std::move(bb));
}

}  // namespace

DiffSpace make_sphere_parallels() {
  DiffSpace x;
  x.name = "sphere_parallels";
  x.ambient_dim = 3;
  x.generators = coordinate_generators(3);
  x.tol = Rational(1, 1000000);  // finite-difference jets compare at 1e-6
  const Rational mem_tol(1, 1000000000);
  x.membership = [mem_tol](const RatVec& p) {
    if (p.size() != 3) return Membership{false, ""};
    Rational r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    if (!close(r2, Rational(1), mem_tol)) return Membership{false, ""};
    if (close(p[2], Rational(1), mem_tol)) return Membership{true, "north-pole"};
    if (close(p[2], Rational(-1), mem_tol)) return Membership{true, "south-pole"};
    return Membership{true, "parallel"};
  };
  x.plaque_predicate = [mem_tol](const SmoothMap& p) {
    if (p.is_polynomial()) {
      // Polynomial maps into the sphere are constant; check exactly.
      PolyExpr r2(p.source_dim());
      for (const auto& c : p.components()) r2 += c * c;
      if (!(r2 == PolyExpr::constant(p.source_dim(), 1)))
        return PlaqueDecision{false, "image leaves the unit sphere"};
      if (p.components()[2].degree() > 0)
        return PlaqueDecision{false, "third coordinate is not constant"};
      return PlaqueDecision{true, ""};
    }
    // Black-box: sample the third coordinate and sphere membership.
    std::vector<double> t0(p.source_dim(), 0.0);
    double z0 = p.eval_d(t0)[2];
    for (int d = -4; d <= 4; ++d) {
      std::vector<double> t(p.source_dim(), d / 16.0);
      auto v = p.eval_d(t);
      double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
      if (std::abs(r2 - 1.0) > 1e-9)
        return PlaqueDecision{false, "image leaves the unit sphere"};
      if (std::abs(v[2] - z0) > 1e-9)
        return PlaqueDecision{false, "third coordinate is not constant"};
    }
    return PlaqueDecision{true, ""};
  };
  auto is_pole = [mem_tol](const RatVec& f) {
    return close(abs_val(f[2]), Rational(1), mem_tol);
  };
  x.curve_family = [is_pole](const RatVec& f, int budget, Sampler& s) {
    std::vector<SmoothMap> out;
    out.push_back(SmoothMap::constant(Box::whole(1), f));
    if (is_pole(f)) return out;  // parallels through a pole degenerate
    double speeds[] = {1.0, -1.0, 2.0, 0.5};
    for (double w : speeds)
      if ((int)out.size() < budget)
        out.push_back(parallel_curve(f, w, 0.25 * (double)s.uniform_int(-2, 2)));
    return out;
  };
  x.joint_constructor = [is_pole](const SmoothMap& p1, const SmoothMap& p2,
                                  JointMode) -> std::optional<SmoothMap> {
    RatVec f = p1.eval(RatVec(p1.source_dim(), 0));
    if (is_pole(f)) {
      // Constant boundary data extends to the constant joint plaque.
      if (p1.is_constant_map() && p2.is_constant_map())
        return SmoothMap::constant(Box::whole(p1.source_dim() + p2.source_dim()), f);
      return std::nullopt;
    }
    // Both plaques run in the parallel of F: add their angles.
    int n = p1.source_dim(), m = p2.source_dim();
    double fx = to_double(f[0]), fy = to_double(f[1]), fz = to_double(f[2]);
    SmoothMap a = p1, b = p2;
    BlackBoxFn bb;
    bb.name = "parallel-joint";
    bb.fn = [a, b, n, m, fx, fy, fz](const std::vector<double>& rs) {
      std::vector<double> r(rs.begin(), rs.begin() + n);
      std::vector<double> s(rs.begin() + n, rs.begin() + n + m);
      auto pa = a.eval_d(r);
      auto pb = b.eval_d(s);
      double tha = std::atan2(pa[1], pa[0]), thb = std::atan2(pb[1], pb[0]);
      double thf = std::atan2(fy, fx);
      double th = tha + thb - thf;
      double rho = std::sqrt(fx * fx + fy * fy);
      return std::vector<double>{rho * std::cos(th), rho * std::sin(th), fz};
    };
    return SmoothMap(Box::centered(n + m, Rational(1, 4)), 3, std::move(bb));
  };
  x.joint_obstruction = [is_pole](const SmoothMap& p1, const SmoothMap& p2,
                                  JointMode) -> std::optional<ProbeCertificate> {
    RatVec f = p1.eval(RatVec(p1.source_dim(), 0));
    if (!is_pole(f)) return std::nullopt;
    auto moving = [](const SmoothMap& p) {
      if (p.is_polynomial()) return !p.is_constant_map();
      std::vector<double> t0(p.source_dim(), 0.0), t1(p.source_dim(), 0.125);
      auto a = p.eval_d(t0), b = p.eval_d(t1);
      double d = 0;
      for (size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
      return d > 1e-18;
    };
    if (moving(p1) || moving(p2))
      return ProbeCertificate{
          "pole-transversality",
          "every plaque through a pole is constant (its parallel degenerates to the "
          "pole), so no plaque traces the requested moving boundary data - strongly "
          "transverse of degree (1,1)"};
    return std::nullopt;
  };
  x.integrator = [is_pole](const SpaceVectorField& field, const SmoothMap& p,
                           const RatVec& r0) -> std::optional<SmoothMap> {
    (void)r0;
    // Realize fields tangent to parallels by rotation flow about the z axis.
    RatVec f = p.eval(RatVec(p.source_dim(), 0));
    if (is_pole(f) && p.is_constant_map()) {
      RatVec w = field.signature_at(f);
      if (w[0] == 0 && w[1] == 0 && w[2] == 0)
        return SmoothMap::constant(Box::whole(p.source_dim() + 1), f);
      return std::nullopt;
    }
    int n = p.source_dim();
    SmoothMap base = p;
    SpaceVectorField fld = field;
    BlackBoxFn bb;
    bb.name = "parallel-flow";
    bb.fn = [base, fld, n](const std::vector<double>& rt) {
      std::vector<double> r(rt.begin(), rt.begin() + n);
      double t = rt[n];
      auto pt = base.eval_d(r);
      RatVec prat(3);
      for (int i = 0; i < 3; ++i) prat[i] = rational_from_double(pt[i]);
      RatVec w = fld.signature_at(prat);
      double rho2 = pt[0] * pt[0] + pt[1] * pt[1];
      double lam = 0.0;
      if (rho2 > 1e-15)
        lam = (to_double(w[0]) * (-pt[1]) + to_double(w[1]) * pt[0]) / rho2;
      double a = lam * t, c = std::cos(a), s = std::sin(a);
      return std::vector<double>{c * pt[0] - s * pt[1], s * pt[0] + c * pt[1], pt[2]};
    };
    return SmoothMap(Box::centered(n + 1, Rational(1, 4)), 3, std::move(bb));
  };
  x.sample_members = [](int count, Sampler& s) {
    std::vector<RatVec> out;
    while ((int)out.size() < count) {
      Rational a = s.rational(3, 2), b = s.rational(3, 2);
      Rational d = a * a + b * b + 1;
      RatVec p{2 * a / d, 2 * b / d, (a * a + b * b - 1) / d};
      if (abs_val(p[2]) == 1) continue;
      out.push_back(std::move(p));
    }
    return out;
  };
  x.has_transverse_points = true;  // the poles
  return x;
}

DiffSpace make_tangent_sheets() {
  DiffSpace x;
  x.name = "tangent_planes";
  x.ambient_dim = 3;
  x.generators = coordinate_generators(3);
  auto sheet_of_point = [](const RatVec& p) -> int {
    // 0 = plane, 1 = paraboloid, 2 = both (tangency point), -1 = neither
    bool plane = p[2] == 0;
    bool parab = p[2] == p[0] * p[0] + p[1] * p[1];
    if (plane && parab) return 2;
    if (plane) return 0;
    if (parab) return 1;
    return -1;
  };
  x.membership = [sheet_of_point](const RatVec& p) {
    if (p.size() != 3) return Membership{false, ""};
    switch (sheet_of_point(p)) {
      case 0: return Membership{true, "plane"};
      case 1: return Membership{true, "paraboloid"};
      case 2: return Membership{true, "tangency-point"};
      default: return Membership{false, ""};
    }
  };
  auto sheet_of_plaque = [](const SmoothMap& p) -> int {
    // 0 plane, 1 paraboloid, 2 constant tangency point, -1 not a plaque
    const auto& c = p.components();
    PolyExpr z = c[2];
    PolyExpr graph = c[0] * c[0] + c[1] * c[1];
    bool plane = z.is_zero();
    bool parab = z == graph;
    if (plane && parab) return 2;
    if (plane) return 0;
    if (parab) return 1;
    return -1;
  };
  x.plaque_predicate = [sheet_of_plaque](const SmoothMap& p) {
    if (!p.is_polynomial())
      return PlaqueDecision{false, "tangent-sheet plaques are polynomial"};
    if (sheet_of_plaque(p) >= 0) return PlaqueDecision{true, ""};
    return PlaqueDecision{false, "image lies in neither sheet"};
  };
  // Graph parameterizations: plane (u, v, 0), paraboloid (u, v, u^2 + v^2).
  auto graph_map = [](int sheet, std::vector<PolyExpr> uv) {
    PolyExpr z = sheet == 0 ? PolyExpr(uv[0].num_vars())
                            : uv[0] * uv[0] + uv[1] * uv[1];
    std::vector<PolyExpr> comps{uv[0], uv[1], z};
    return SmoothMap(Box::whole(uv[0].num_vars()), std::move(comps));
  };
  x.curve_family = [graph_map, sheet_of_point](const RatVec& f, int budget, Sampler& s) {
    std::vector<SmoothMap> out;
    int sheet = sheet_of_point(f);
    std::vector<int> sheets = sheet == 2 ? std::vector<int>{0, 1} : std::vector<int>{sheet};
    while ((int)out.size() < budget) {
      for (int sh : sheets) {
        if ((int)out.size() >= budget) break;
        RatVec d = s.nonzero_vector(2, 4, 2);
        PolyExpr t = PolyExpr::variable(1, 0);
        std::vector<PolyExpr> uv{
            PolyExpr::constant(1, f[0]) + t.scaled(d[0]),
            PolyExpr::constant(1, f[1]) + t.scaled(d[1])};
        out.push_back(graph_map(sh, std::move(uv)));
      }
    }
    return out;
  };
  x.plaque_sum = [graph_map, sheet_of_plaque](const SmoothMap& p1, const SmoothMap& p2)
      -> std::optional<SmoothMap> {
    int s1 = sheet_of_plaque(p1), s2 = sheet_of_plaque(p2);
    if (s1 < 0 || s2 < 0) return std::nullopt;
    RatVec f = p1.eval(RatVec(p1.source_dim(), 0));
    int target = s1 == s2 ? (s1 == 2 ? 0 : s1)
                          : (f[0] == 0 && f[1] == 0 && f[2] == 0 ? 0 : -1);
    if (target < 0) return std::nullopt;
    std::vector<PolyExpr> uv;
    for (int i = 0; i < 2; ++i)
      uv.push_back(p1.components()[i] + p2.components()[i] -
                   PolyExpr::constant(p1.source_dim(), f[i]));
    return graph_map(target, std::move(uv));
  };
  x.joint_constructor = [graph_map, sheet_of_plaque](const SmoothMap& p1, const SmoothMap& p2,
                                                     JointMode mode)
      -> std::optional<SmoothMap> {
    int s1 = sheet_of_plaque(p1), s2 = sheet_of_plaque(p2);
    if (s1 < 0 || s2 < 0) return std::nullopt;
    int n = p1.source_dim(), m = p2.source_dim();
    RatVec f = p1.eval(RatVec(n, 0));
    bool same_sheet = s1 == s2 || s1 == 2 || s2 == 2;
    if (!same_sheet && mode == JointMode::Strong) return std::nullopt;
    int target = s1 != 2 ? s1 : (s2 != 2 ? s2 : 0);
    // q(r, s) = graph(uv1(r) + uv2(s) - uv(F)) in the target sheet. In weak
    // mode the cross-sheet case realizes the second trace classwise: at the
    // tangency point the first-order data of the two sheets agrees.
    std::vector<PolyExpr> uv;
    for (int i = 0; i < 2; ++i) {
      PolyExpr a = p1.components()[i];  // in r variables
      PolyExpr b = p2.components()[i];  // in s variables
      // embed into (r, s) variables
      std::vector<PolyExpr> rvars, svars;
      for (int j = 0; j < n; ++j) rvars.push_back(PolyExpr::variable(n + m, j));
      for (int j = 0; j < m; ++j) svars.push_back(PolyExpr::variable(n + m, n + j));
      PolyExpr c = a.substitute(rvars) + b.substitute(svars);
      c -= PolyExpr::constant(n + m, f[i]);
      uv.push_back(std::move(c));
    }
    return graph_map(target, std::move(uv));
  };
  x.joint_obstruction = [sheet_of_plaque](const SmoothMap& p1, const SmoothMap& p2,
                                          JointMode mode) -> std::optional<ProbeCertificate> {
    if (mode != JointMode::Strong) return std::nullopt;
    if (!p1.is_polynomial() || !p2.is_polynomial()) return std::nullopt;
    int s1 = sheet_of_plaque(p1), s2 = sheet_of_plaque(p2);
    if (s1 >= 0 && s2 >= 0 && s1 != s2 && s1 != 2 && s2 != 2)
      return ProbeCertificate{
          "sheet-obstruction",
          "a polynomial plaque lies in a single sheet; the requested boundary traces lie "
          "in different sheets through the tangency point (classwise joins still exist)"};
    return std::nullopt;
  };
  x.integrator = [graph_map, sheet_of_plaque](const SpaceVectorField& field, const SmoothMap& p,
                                              const RatVec& r0) -> std::optional<SmoothMap> {
    (void)r0;
    if (!field.ambient_formula || !p.is_polynomial()) return std::nullopt;
    int sheet = sheet_of_plaque(p);
    if (sheet < 0) return std::nullopt;
    if (sheet == 2) sheet = 0;
    int n = p.source_dim();
    // Flow in graph coordinates with the horizontal part of the field.
    std::vector<PolyExpr> lift;
    for (int i = 0; i < 3; ++i) {
      std::vector<PolyExpr> rvars;
      for (int j = 0; j < n; ++j) rvars.push_back(PolyExpr::variable(n + 1, j));
      lift.push_back(p.components()[i].substitute(rvars));
    }
    PolyExpr t = PolyExpr::variable(n + 1, n);
    std::vector<PolyExpr> uv;
    for (int i = 0; i < 2; ++i) {
      PolyExpr xi_i = (*field.ambient_formula)[i].substitute(lift);
      uv.push_back(lift[i] + t * xi_i);
    }
    return graph_map(sheet, std::move(uv));
  };
  x.spanning_plaques = [graph_map, sheet_of_point](const RatVec& f,
                                                   const std::vector<RatVec>& dirs) {
    std::vector<SmoothMap> out;
    int k = (int)dirs.size();
    if (k == 0) return out;
    int sheet = sheet_of_point(f);
    std::vector<int> sheets = sheet == 2 ? std::vector<int>{0, 1} : std::vector<int>{sheet};
    for (int sh : sheets) {
      // Directions must be tangent to the sheet at f.
      bool ok = true;
      for (const auto& d : dirs) {
        Rational want = sh == 0 ? Rational(0) : 2 * f[0] * d[0] + 2 * f[1] * d[1];
        if (d[2] != want) ok = false;
      }
      if (!ok) continue;
      std::vector<PolyExpr> uv;
      for (int i = 0; i < 2; ++i) {
        PolyExpr c = PolyExpr::constant(k, f[i]);
        for (int j = 0; j < k; ++j) c += PolyExpr::variable(k, j).scaled(dirs[j][i]);
        uv.push_back(std::move(c));
      }
      out.push_back(graph_map(sh, std::move(uv)));
    }
    return out;
  };
  x.sample_members = [](int count, Sampler& s) {
    std::vector<RatVec> out;
    for (int i = 0; i < count; ++i) {
      RatVec uv = s.vector(2, 4, 2);
      if (i % 2 == 0)
        out.push_back(RatVec{uv[0], uv[1], 0});
      else
        out.push_back(RatVec{uv[0], uv[1], uv[0] * uv[0] + uv[1] * uv[1]});
    }
    return out;
  };
  x.has_transverse_points = false;  // classwise joins exist everywhere
  return x;
}

SmoothMap sphere_parallel_plaque(const RatVec& base, double angular_velocity) {
  return parallel_curve(base, angular_velocity, 0.0);
}

SpaceVectorField sphere_tangential_field() {
  SpaceVectorField field;
  field.name = "parallel-rotation";
  std::vector<PolyExpr> formula{-PolyExpr::variable(3, 1), PolyExpr::variable(3, 0),
                                PolyExpr(3)};
  field.ambient_formula = formula;
  auto f = formula;
  field.signature_at = [f](const RatVec& p) {
    return RatVec{f[0].eval(p), f[1].eval(p), f[2].eval(p)};
  };
  field.witness_at = [f](const RatVec& p) {
    RatMat col(3, RatVec(1));
    for (int i = 0; i < 3; ++i) col[i][0] = f[i].eval(p);
    return SmoothMap::linear(col, p);
  };
  return field;
}

DiffSpace space_by_name(const std::string& name) {
  if (name.rfind("euclidean:", 0) == 0) {
    int n = 0;
    try {
      n = std::stoi(name.substr(10));
    } catch (...) {
      throw CalcError(ErrorKind::Schema, "bad euclidean dimension in '" + name + "'");
    }
    return make_euclidean(n);
  }
  if (name == "axes") return make_axes_union(true);
  if (name == "axes_punctured") return make_axes_union(false);
  if (name == "lines") return make_lines_plane();
  if (name == "sphere_parallels") return make_sphere_parallels();
  if (name == "tangent_planes" || name == "tangent_sheets") return make_tangent_sheets();
  throw CalcError(ErrorKind::Schema, "unknown fixture '" + name + "'");
}

Rational cutoff_1d(const Rational& t, const Rational& inner, const Rational& outer) {
  if (!(0 < inner && inner < outer))
    throw CalcError(ErrorKind::Domain, "cutoff needs 0 < inner < outer");
  Rational a = abs_val(t);
  if (a <= inner) return 1;
  if (a >= outer) return 0;
  Rational u = (a - inner) / (outer - inner);
  return 1 - u * u * (3 - 2 * u);  // C^1 smoothstep
}

RatVec bump_extension_value(const VectorFieldOnBox& local_field, const Box& inner,
                            const Box& outer, const RatVec& p) {
  Rational g = 1;
  for (int i = 0; i < inner.dim; ++i) {
    // symmetric per-axis radii around the box centers
    Rational ci = (inner.lo[i] + inner.hi[i]) / 2;
    Rational ri = (inner.hi[i] - inner.lo[i]) / 2;
    Rational ro_lo = ci - outer.lo[i], ro_hi = outer.hi[i] - ci;
    Rational ro = ro_lo < ro_hi ? ro_lo : ro_hi;
    g *= cutoff_1d(p[i] - ci, ri, ro);
    if (g == 0) break;
  }
  RatVec v(local_field.components.size(), 0);
  if (g == 0) return v;
  RatVec raw = local_field.eval(p);
  for (size_t i = 0; i < raw.size(); ++i) v[i] = raw[i] * g;
  return v;
}

SpaceVectorField bump_extension(const VectorFieldOnBox& local_field, const Box& inner,
                                const Box& outer) {
  if (!outer.contains_box(inner))
    throw CalcError(ErrorKind::Domain, "inner box must sit strictly inside the outer box");
  SpaceVectorField field;
  field.name = "bump-extension";
  VectorFieldOnBox lf = local_field;
  Box in = inner, out = outer;
  field.signature_at = [lf, in, out](const RatVec& p) {
    return bump_extension_value(lf, in, out, p);
  };
  field.witness_at = [lf, in, out](const RatVec& p) {
    RatVec v = bump_extension_value(lf, in, out, p);
    RatMat col(v.size(), RatVec(1));
    for (size_t i = 0; i < v.size(); ++i) col[i][0] = v[i];
    return SmoothMap::linear(col, p);
  };
  return field;
}

}  // namespace tdsc
