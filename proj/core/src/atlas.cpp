#include "tdscalc/atlas.hpp"

#include <cmath>

namespace tdsc {

SmoothMap Atlas::transition(int to_chart, int from_chart) const {
  return compose(charts[to_chart].inverse, charts[from_chart].forward);
}

bool Atlas::chart_contains(int chart, const RatVec& ambient_point) const {
  const Chart& c = charts[chart];
  RatVec u;
  try {
    u = c.inverse.eval(ambient_point);
  } catch (const CalcError&) {
    return false;
  }
  if (!c.param_box.contains(u)) return false;
  RatVec back = c.forward.eval(u);
  Rational t = tol == 0 ? Rational(0) : tol;
  return close_vec(back, ambient_point, t);
}

int Atlas::chart_for(const RatVec& ambient_point) const {
  for (int i = 0; i < (int)charts.size(); ++i)
    if (chart_contains(i, ambient_point)) return i;
  throw CalcError(ErrorKind::Domain, "point lies on no chart of the atlas");
}

std::vector<RatVec> Atlas::tangent_frame(const RatVec& ambient_point) const {
  int i = chart_for(ambient_point);
  RatVec u = charts[i].inverse.eval(ambient_point);
  RatMat jac = charts[i].forward.jacobian(u);
  std::vector<RatVec> frame;
  frame.reserve(manifold_dim);
  for (int c = 0; c < manifold_dim; ++c) {
    RatVec col(ambient_dim);
    for (int r = 0; r < ambient_dim; ++r) col[r] = jac[r][c];
    frame.push_back(std::move(col));
  }
  return frame;
}

AtlasSpace make_atlas_plane2() {
  AtlasSpace m;
  m.space = make_euclidean(2);
  m.space.name = "atlas:plane2";
  m.atlas.manifold_dim = 2;
  m.atlas.ambient_dim = 2;
  m.atlas.tol = 0;
  Box big = Box::centered(2, 6);
  Chart c0{"chart0", big, SmoothMap::identity(2), SmoothMap::identity(2)};
  // translated chart: forward u -> u + (1, 1/2)
  RatVec shift{1, Rational(1, 2)};
  RatVec unshift{-1, Rational(-1, 2)};
  Chart c1{"chart1", big, SmoothMap::linear(mat_identity(2), shift),
           SmoothMap::linear(mat_identity(2), unshift)};
  m.atlas.charts = {c0, c1};
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; b += 2) {
      m.atlas.overlap_samples.push_back({1, 0, RatVec{Rational(a, 2), Rational(b, 3)}});
      m.atlas.overlap_samples.push_back({0, 1, RatVec{Rational(a, 2), Rational(b, 3)}});
    }
  return m;
}

namespace {

BlackBoxFn rational_circle_chart(bool flip) {
  BlackBoxFn bb;
  bb.name = flip ? "circle-chart-flip" : "circle-chart";
  bb.fn = [flip](const std::vector<double>& t) {
    double u = t[0];
    double d = 1 + u * u;
    double x = (1 - u * u) / d, y = 2 * u / d;
    if (flip) x = -x;
    return std::vector<double>{x, y};
  };
  return bb;
}

BlackBoxFn rational_circle_inverse(bool flip) {
  BlackBoxFn bb;
  bb.name = flip ? "circle-inverse-flip" : "circle-inverse";
  bb.fn = [flip](const std::vector<double>& p) {
    double x = flip ? -p[0] : p[0];
    return std::vector<double>{p[1] / (1 + x)};
  };
  return bb;
}

}  // namespace

AtlasSpace make_atlas_circle2() {
  AtlasSpace m;
  DiffSpace x;
  x.name = "atlas:circle2";
  x.ambient_dim = 2;
  x.generators = {PolyExpr::variable(2, 0), PolyExpr::variable(2, 1)};
  x.tol = Rational(1, 1000000);
  const Rational mem_tol(1, 1000000000);
  x.membership = [mem_tol](const RatVec& p) {
    if (p.size() != 2) return Membership{false, ""};
    return Membership{close(p[0] * p[0] + p[1] * p[1], Rational(1), mem_tol), ""};
  };
  x.plaque_predicate = [](const SmoothMap& p) {
    if (p.is_polynomial()) {
      PolyExpr r2(p.source_dim());
      for (const auto& c : p.components()) r2 += c * c;
      bool ok = r2 == PolyExpr::constant(p.source_dim(), 1);
      return PlaqueDecision{ok, ok ? "" : "image leaves the unit circle"};
    }
    for (int d = -4; d <= 4; ++d) {
      std::vector<double> t(p.source_dim(), d / 16.0);
      auto v = p.eval_d(t);
      if (std::abs(v[0] * v[0] + v[1] * v[1] - 1.0) > 1e-9)
        return PlaqueDecision{false, "image leaves the unit circle"};
    }
    return PlaqueDecision{true, ""};
  };
  x.sample_members = [](int count, Sampler& s) {
    std::vector<RatVec> out;
    while ((int)out.size() < count) {
      Rational t = s.rational(3, 2);
      Rational d = 1 + t * t;
      out.push_back(RatVec{(1 - t * t) / d, 2 * t / d});
    }
    return out;
  };
  m.space = std::move(x);
  m.atlas.manifold_dim = 1;
  m.atlas.ambient_dim = 2;
  m.atlas.tol = Rational(1, 1000000000);
  Box b = Box::centered(1, 8);
  Chart c0{"rational-param", b, SmoothMap(b, 2, rational_circle_chart(false)),
           SmoothMap(Box::whole(2), 1, rational_circle_inverse(false))};
  Chart c1{"rational-param-flip", b, SmoothMap(b, 2, rational_circle_chart(true)),
           SmoothMap(Box::whole(2), 1, rational_circle_inverse(true))};
  m.atlas.charts = {c0, c1};
  // overlap: both charts defined away from (+-1, 0), i.e. parameters != 0
  for (int k : {-5, -3, -2, 2, 3, 5}) {
    m.atlas.overlap_samples.push_back({0, 1, RatVec{Rational(k, 4)}});
    m.atlas.overlap_samples.push_back({1, 0, RatVec{Rational(k, 4)}});
  }
  return m;
}

namespace {

BlackBoxFn stereographic_chart(bool from_north) {
  BlackBoxFn bb;
  bb.name = from_north ? "stereo-north" : "stereo-south";
  bb.fn = [from_north](const std::vector<double>& u) {
    double n2 = u[0] * u[0] + u[1] * u[1];
    double d = 1 + n2;
    double z = (n2 - 1) / d;
    if (!from_north) z = -z;
    return std::vector<double>{2 * u[0] / d, 2 * u[1] / d, z};
  };
  return bb;
}

BlackBoxFn stereographic_inverse(bool from_north) {
  BlackBoxFn bb;
  bb.name = from_north ? "stereo-north-inv" : "stereo-south-inv";
  bb.fn = [from_north](const std::vector<double>& p) {
    double denom = from_north ? (1 - p[2]) : (1 + p[2]);
    return std::vector<double>{p[0] / denom, p[1] / denom};
  };
  return bb;
}

}  // namespace

AtlasSpace make_atlas_sphere2() {
  AtlasSpace m;
  DiffSpace x;
  x.name = "atlas:sphere2";
  x.ambient_dim = 3;
  x.generators = {PolyExpr::variable(3, 0), PolyExpr::variable(3, 1),
                  PolyExpr::variable(3, 2)};
  x.tol = Rational(1, 1000000);
  const Rational mem_tol(1, 1000000000);
  x.membership = [mem_tol](const RatVec& p) {
    if (p.size() != 3) return Membership{false, ""};
    Rational r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    return Membership{close(r2, Rational(1), mem_tol), ""};
  };
  x.plaque_predicate = [](const SmoothMap& p) {
    if (p.is_polynomial()) {
      PolyExpr r2(p.source_dim());
      for (const auto& c : p.components()) r2 += c * c;
      bool ok = r2 == PolyExpr::constant(p.source_dim(), 1);
      return PlaqueDecision{ok, ok ? "" : "image leaves the unit sphere"};
    }
    for (int d = -3; d <= 3; ++d) {
      std::vector<double> t(p.source_dim(), d / 16.0);
      auto v = p.eval_d(t);
      if (std::abs(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - 1.0) > 1e-9)
        return PlaqueDecision{false, "image leaves the unit sphere"};
    }
    return PlaqueDecision{true, ""};
  };
  x.sample_members = [](int count, Sampler& s) {
    std::vector<RatVec> out;
    while ((int)out.size() < count) {
      Rational a = s.rational(3, 2), b = s.rational(3, 2);
      Rational d = a * a + b * b + 1;
      out.push_back(RatVec{2 * a / d, 2 * b / d, (a * a + b * b - 1) / d});
    }
    return out;
  };
  m.space = std::move(x);
  m.atlas.manifold_dim = 2;
  m.atlas.ambient_dim = 3;
  m.atlas.tol = Rational(1, 1000000000);
  Box b = Box::centered(2, 8);
  Chart north{"stereo-north", b, SmoothMap(b, 3, stereographic_chart(true)),
              SmoothMap(Box::whole(3), 2, stereographic_inverse(true))};
  Chart south{"stereo-south", b, SmoothMap(b, 3, stereographic_chart(false)),
              SmoothMap(Box::whole(3), 2, stereographic_inverse(false))};
  m.atlas.charts = {north, south};
  // overlap: parameters with 1/2 < |u| < 2
  std::vector<RatVec> params{{1, 0},           {0, 1},           {Rational(3, 4), Rational(1, 2)},
                             {-1, Rational(1, 2)}, {Rational(1, 2), -1}, {-1, -1}};
  for (const auto& u : params) {
    m.atlas.overlap_samples.push_back({0, 1, u});
    m.atlas.overlap_samples.push_back({1, 0, u});
  }
  return m;
}

AtlasSpace atlas_by_name(const std::string& name) {
  if (name == "atlas:plane2") return make_atlas_plane2();
  if (name == "atlas:circle2") return make_atlas_circle2();
  if (name == "atlas:sphere2") return make_atlas_sphere2();
  throw CalcError(ErrorKind::Schema, "unknown atlas fixture '" + name + "'");
}

ChartFormCollection chart_collection_from_pointwise(const AtlasSpace& m,
                                                    const PointwiseForm& omega) {
  if (omega.ambient_dim != m.atlas.ambient_dim)
    throw CalcError(ErrorKind::Dimension, "form dimension != atlas ambient dimension");
  ChartFormCollection out;
  out.degree = omega.degree;
  for (const auto& chart : m.atlas.charts) {
    if (chart.forward.is_polynomial() && omega.witness) {
      DifferentialForm pulled = pullback_smooth(chart.forward, *omega.witness);
      out.forms.push_back(PointwiseForm::from_differential(pulled));
    } else {
      PointwiseForm f;
      f.ambient_dim = m.atlas.manifold_dim;
      f.degree = omega.degree;
      SmoothMap fwd = chart.forward;
      PointwiseForm base = omega;
      f.at = [fwd, base](const RatVec& u) {
        return pullback_linear(fwd.jacobian(u), base.at(fwd.eval(u)));
      };
      out.forms.push_back(std::move(f));
    }
  }
  return out;
}

namespace {

bool exterior_forms_close(const ExteriorForm& a, const ExteriorForm& b, const Rational& tol) {
  if (a.dim() != b.dim() || a.degree() != b.degree()) return false;
  for (const auto& idx : MultiIndex::all(a.dim(), a.degree()))
    if (!close(a.coeff(idx), b.coeff(idx), tol)) return false;
  return true;
}

}  // namespace

CompatibilityReport collection_compatibility_check(const AtlasSpace& m,
                                                   const ChartFormCollection& c) {
  for (const auto& sample : m.atlas.overlap_samples) {
    int i = sample.chart_to, j = sample.chart_from;
    SmoothMap trans = m.atlas.transition(i, j);
    RatVec u = sample.param;
    RatVec v = trans.eval(u);
    ExteriorForm lhs = c.forms[j].at(u);
    ExteriorForm rhs = pullback_linear(trans.jacobian(u), c.forms[i].at(v));
    if (!exterior_forms_close(lhs, rhs, m.atlas.tol))
      return {false, "transition law fails on chart pair (" + std::to_string(i) + "," +
                         std::to_string(j) + ") at a recorded overlap sample"};
  }
  return {true, ""};
}

PointwiseForm pointwise_from_chart_collection(const AtlasSpace& m,
                                              const ChartFormCollection& c) {
  auto compat = collection_compatibility_check(m, c);
  if (!compat.pass)
    throw CalcError(ErrorKind::Domain, "incompatible chart collection: " + compat.witness);
  PointwiseForm out;
  out.ambient_dim = m.atlas.ambient_dim;
  out.degree = c.degree;
  Atlas atlas = m.atlas;
  ChartFormCollection coll = c;
  out.at = [atlas, coll](const RatVec& f) {
    int i = atlas.chart_for(f);
    RatVec u = atlas.charts[i].inverse.eval(f);
    return pullback_linear(atlas.charts[i].inverse.jacobian(f), coll.forms[i].at(u));
  };
  // polynomial witness through an exact chart covering the fixture
  for (size_t i = 0; i < atlas.charts.size(); ++i) {
    const Chart& ch = atlas.charts[i];
    if (ch.inverse.is_polynomial() && coll.forms[i].witness && !ch.param_box.bounded) {
      out.witness = pullback_smooth(ch.inverse, *coll.forms[i].witness);
      break;
    }
  }
  if (!out.witness) {
    // exact plane-style atlases keep wholeness through bounded boxes too
    for (size_t i = 0; i < atlas.charts.size(); ++i) {
      const Chart& ch = atlas.charts[i];
      if (ch.inverse.is_polynomial() && coll.forms[i].witness && m.atlas.tol == 0) {
        out.witness = pullback_smooth(ch.inverse, *coll.forms[i].witness);
        break;
      }
    }
  }
  return out;
}

BundleSection section_from_pointwise(const AtlasSpace& m, const PointwiseForm& omega) {
  ChartFormCollection coll = chart_collection_from_pointwise(m, omega);
  BundleSection s;
  s.manifold_dim = m.atlas.manifold_dim;
  s.degree = omega.degree;
  auto indices = MultiIndex::all(s.manifold_dim, s.degree);
  for (const auto& form : coll.forms) {
    PointwiseForm f = form;
    auto idx = indices;
    s.coeff_at.push_back([f, idx](const RatVec& u) {
      ExteriorForm at = f.at(u);
      RatVec coeffs(idx.size());
      for (size_t k = 0; k < idx.size(); ++k) coeffs[k] = at.coeff(idx[k]);
      return coeffs;
    });
    if (form.witness) {
      std::vector<PolyExpr> polys;
      polys.reserve(indices.size());
      for (const auto& i : indices) polys.push_back(form.witness->coeff(i));
      s.poly_coeffs.push_back(std::move(polys));
    } else {
      s.poly_coeffs.push_back(std::nullopt);
    }
  }
  return s;
}

PointwiseForm pointwise_from_section(const AtlasSpace& m, const BundleSection& s) {
  ChartFormCollection coll;
  coll.degree = s.degree;
  auto indices = MultiIndex::all(s.manifold_dim, s.degree);
  for (size_t c = 0; c < s.coeff_at.size(); ++c) {
    if (s.poly_coeffs[c]) {
      DifferentialForm w(m.atlas.charts[c].param_box, s.degree);
      for (size_t k = 0; k < indices.size(); ++k) w.add_coeff(indices[k], (*s.poly_coeffs[c])[k]);
      coll.forms.push_back(PointwiseForm::from_differential(w));
    } else {
      PointwiseForm f;
      f.ambient_dim = s.manifold_dim;
      f.degree = s.degree;
      auto rule = s.coeff_at[c];
      auto idx = indices;
      int dim = s.manifold_dim;
      int deg = s.degree;
      f.at = [rule, idx, dim, deg](const RatVec& u) {
        ExteriorForm out(dim, deg);
        RatVec coeffs = rule(u);
        for (size_t k = 0; k < idx.size(); ++k) out.add_coeff(idx[k], coeffs[k]);
        return out;
      };
      coll.forms.push_back(std::move(f));
    }
  }
  return pointwise_from_chart_collection(m, coll);
}

bool pointwise_forms_agree_at(const AtlasSpace& m, const PointwiseForm& a,
                              const PointwiseForm& b, const RatVec& f, const Rational& tol) {
  auto frame = m.atlas.tangent_frame(f);
  int k = a.degree;
  ExteriorForm fa = a.at(f), fb = b.at(f);
  // compare on all k-tuples from the frame
  std::vector<int> pick(k, 0);
  std::function<bool(int)> rec = [&](int pos) -> bool {
    if (pos == k) {
      std::vector<RatVec> vs;
      vs.reserve(k);
      for (int i : pick) vs.push_back(frame[i]);
      return close(fa.evaluate(vs), fb.evaluate(vs), tol);
    }
    for (int i = 0; i < (int)frame.size(); ++i) {
      pick[pos] = i;
      if (!rec(pos + 1)) return false;
    }
    return true;
  };
  return rec(0);
}

}  // namespace tdsc
