#include "tdscalc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

namespace tdsc {

namespace {

class SuiteBuilder {
public:
  SuiteBuilder(std::string suite, uint64_t seed, int samples) {
    report_.suite = std::move(suite);
    report_.seed = seed;
    report_.samples = samples;
  }

  void check(const std::string& id, bool ok, json witness = nullptr) {
    CaseResult c;
    c.id = id;
    c.status = ok ? "pass" : "fail";
    c.witness = std::move(witness);
    finish(std::move(c));
  }

  /// Run a case body; exceptions become status "error".
  template <typename Fn>
  void run(const std::string& id, Fn&& body) {
    auto start = std::chrono::steady_clock::now();
    CaseResult c;
    c.id = id;
    try {
      body(c);
      if (c.status.empty()) c.status = "pass";
    } catch (const std::exception& e) {
      c.status = "error";
      c.witness = json{{"error", e.what()}};
    }
    c.time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    report_.cases.push_back(std::move(c));
  }

  Report take() {
    std::sort(report_.cases.begin(), report_.cases.end(),
              [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
    return std::move(report_);
  }

private:
  void finish(CaseResult c) { report_.cases.push_back(std::move(c)); }
  Report report_;
};

void set_fail(CaseResult& c, json witness = nullptr) {
  c.status = "fail";
  c.witness = std::move(witness);
}

std::string idx3(const char* stem, int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", i);
  return std::string(stem) + "/" + buf;
}

// ---------------------------------------------------------------------------
// Random exact data
// ---------------------------------------------------------------------------

ExteriorForm random_exterior(Sampler& s, int dim, int degree, int max_terms = 3) {
  ExteriorForm f(dim, degree);
  auto all = MultiIndex::all(dim, degree);
  if (all.empty()) return f;
  for (int t = 0; t < max_terms; ++t)
    f.add_coeff(all[(size_t)s.uniform_int(0, (long long)all.size() - 1)], s.rational(5, 2));
  return f;
}

PolyExpr random_poly(Sampler& s, int vars, int max_deg, int terms) {
  PolyExpr p(vars);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> e(vars, 0);
    int budget = max_deg;
    for (int v = 0; v < vars; ++v) {
      int d = (int)s.uniform_int(0, budget);
      e[v] = d;
      budget -= d;
    }
    p.add_term(e, s.rational(4, 2));
  }
  return p;
}

DifferentialForm random_diff_form(Sampler& s, int dim, int degree, int coeff_deg = 2) {
  DifferentialForm f(Box::whole(dim), degree);
  for (const auto& idx : MultiIndex::all(dim, degree))
    if (s.coin() || f.coeffs().empty())
      f.add_coeff(idx, random_poly(s, dim, coeff_deg, 2));
  return f;
}

SmoothMap random_poly_map(Sampler& s, int src, int dst, int deg) {
  std::vector<PolyExpr> comps;
  comps.reserve(dst);
  for (int i = 0; i < dst; ++i) comps.push_back(random_poly(s, src, deg, 3));
  return SmoothMap(Box::whole(src), std::move(comps));
}

RatMat random_matrix(Sampler& s, int rows, int cols) {
  RatMat m(rows, RatVec(cols));
  for (auto& row : m)
    for (auto& v : row) v = s.rational(4, 2);
  return m;
}

// ---------------------------------------------------------------------------
// Independent oracle: the permutation-sum (shuffle) wedge evaluation. Kept
// deliberately separate from the merge implementation it checks.
// ---------------------------------------------------------------------------

void shuffles(int k, int l, std::vector<std::pair<std::vector<int>, std::vector<int>>>& out) {
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int start) {
    if ((int)pick.size() == k) {
      std::vector<int> rest;
      for (int i = 0; i < k + l; ++i)
        if (std::find(pick.begin(), pick.end(), i) == pick.end()) rest.push_back(i);
      out.emplace_back(pick, rest);
      return;
    }
    for (int i = start; i < k + l; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
}

int shuffle_sign(const std::vector<int>& left, const std::vector<int>& right) {
  std::vector<int> perm = left;
  perm.insert(perm.end(), right.begin(), right.end());
  int inv = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

Rational wedge_shuffle_oracle(const ExteriorForm& a, const ExteriorForm& b,
                              const std::vector<RatVec>& vectors) {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> parts;
  shuffles(a.degree(), b.degree(), parts);
  Rational total = 0;
  for (const auto& [left, right] : parts) {
    std::vector<RatVec> va, vb;
    for (int i : left) va.push_back(vectors[i]);
    for (int i : right) vb.push_back(vectors[i]);
    total += Rational(shuffle_sign(left, right)) * a.evaluate(va) * b.evaluate(vb);
  }
  return total;
}

// ---------------------------------------------------------------------------
// algebra suite: exterior algebra laws, exact
// ---------------------------------------------------------------------------

void suite_algebra(SuiteBuilder& sb, uint64_t seed, int samples) {
  Sampler s(seed * 2654435761u + 1);
  int n = std::max(200, samples);
  for (int i = 0; i < n; ++i) {
    sb.run(idx3("laws", i), [&](CaseResult& c) {
      int dim = (int)s.uniform_int(1, 5);
      int k = (int)s.uniform_int(0, 3), l = (int)s.uniform_int(0, 3);
      ExteriorForm a = random_exterior(s, dim, k);
      ExteriorForm b = random_exterior(s, dim, l);
      ExteriorForm c3 = random_exterior(s, dim, (int)s.uniform_int(0, 2));
      // skew commutativity
      ExteriorForm ab = wedge(a, b);
      ExteriorForm ba = wedge(b, a);
      Rational sign = (k * l) % 2 == 0 ? 1 : -1;
      if (!(ab == ba.scaled(sign))) return set_fail(c, json{{"law", "skew"}});
      // associativity
      if (!(wedge(ab, c3) == wedge(a, wedge(b, c3))))
        return set_fail(c, json{{"law", "assoc"}});
      // bilinearity
      ExteriorForm a2 = random_exterior(s, dim, k);
      if (!(wedge(a + a2, b) == wedge(a, b) + wedge(a2, b)))
        return set_fail(c, json{{"law", "additive"}});
      Rational sc = s.rational(4, 2);
      if (!(wedge(a.scaled(sc), b) == ab.scaled(sc)))
        return set_fail(c, json{{"law", "homogeneous"}});
      // merge vs shuffle oracle
      if (k + l <= 4 && k + l <= dim) {
        std::vector<RatVec> vecs;
        for (int v = 0; v < k + l; ++v) vecs.push_back(s.vector(dim, 3, 2));
        if (!(ab.evaluate(vecs) == wedge_shuffle_oracle(a, b, vecs)))
          return set_fail(c, json{{"law", "shuffle-oracle"}});
      }
    });
  }
  for (int i = 0; i < std::max(200, samples); ++i) {
    sb.run(idx3("decomposable", i), [&](CaseResult& c) {
      int dim = (int)s.uniform_int(1, 5);
      int k = (int)s.uniform_int(1, std::min(3, dim));
      std::vector<RatVec> covs, vecs;
      for (int j = 0; j < k; ++j) {
        covs.push_back(s.vector(dim, 3, 2));
        vecs.push_back(s.vector(dim, 3, 2));
      }
      ExteriorForm w = ExteriorForm::covector(covs[0]);
      for (int j = 1; j < k; ++j) w = wedge(w, ExteriorForm::covector(covs[j]));
      if (!(decomposable_eval(covs, vecs) == w.evaluate(vecs)))
        return set_fail(c);
    });
  }
  // evaluate is alternating & multilinear
  for (int i = 0; i < std::max(64, samples); ++i) {
    sb.run(idx3("alternating", i), [&](CaseResult& c) {
      int dim = (int)s.uniform_int(2, 5);
      int k = (int)s.uniform_int(2, std::min(3, dim));
      ExteriorForm w = random_exterior(s, dim, k);
      std::vector<RatVec> vs;
      for (int j = 0; j < k; ++j) vs.push_back(s.vector(dim, 3, 2));
      Rational base = w.evaluate(vs);
      std::swap(vs[0], vs[1]);
      if (!(w.evaluate(vs) == -base)) return set_fail(c, json{{"prop", "swap"}});
      std::swap(vs[0], vs[1]);
      // shear invariance
      RatVec shear = vs[0];
      Rational t = s.rational(3, 2);
      for (size_t j = 0; j < shear.size(); ++j) shear[j] = vs[1][j] + t * vs[0][j];
      auto vs2 = vs;
      vs2[1] = shear;
      if (!(w.evaluate(vs2) == base)) return set_fail(c, json{{"prop", "shear"}});
      // repeated argument
      vs2 = vs;
      vs2[1] = vs2[0];
      if (!(w.evaluate(vs2) == 0)) return set_fail(c, json{{"prop", "repeat"}});
    });
  }
  // volume form anchor + basis completeness
  for (int i = 0; i < 32; ++i) {
    sb.run(idx3("volume", i), [&](CaseResult& c) {
      int dim = (int)s.uniform_int(1, 4);
      std::vector<RatVec> rows;
      RatMat m(dim, RatVec(dim));
      for (int r = 0; r < dim; ++r) {
        for (int cc = 0; cc < dim; ++cc) m[r][cc] = Rational(s.uniform_int(-4, 4));
        rows.push_back(m[r]);
      }
      if (!(ExteriorForm::volume(dim).evaluate(rows) == mat_det(m))) return set_fail(c);
    });
  }
  for (int i = 0; i < 32; ++i) {
    sb.run(idx3("basis-complete", i), [&](CaseResult& c) {
      int dim = (int)s.uniform_int(1, 4);
      int k = (int)s.uniform_int(1, dim);
      ExteriorForm w = random_exterior(s, dim, k);
      // reconstruct from values on standard-basis tuples
      ExteriorForm rebuilt(dim, k);
      for (const auto& idx : MultiIndex::all(dim, k)) {
        std::vector<RatVec> es;
        for (int j : idx.idx) {
          RatVec e(dim, 0);
          e[j] = 1;
          es.push_back(std::move(e));
        }
        rebuilt.add_coeff(idx, w.evaluate(es));
      }
      if (!(rebuilt == w)) return set_fail(c);
    });
  }
  // projection volume forms
  sb.run("projection/coordinate", [&](CaseResult& c) {
    std::vector<RatVec> basis{{1, 0, 0}, {0, 1, 0}};
    ExteriorForm w = projection_volume_form(3, basis);
    ExteriorForm expect = ExteriorForm::basis(3, MultiIndex({0, 1}));
    if (!(w == expect)) return set_fail(c);
  });
  sb.run("projection/tilted", [&](CaseResult& c) {
    std::vector<RatVec> basis{{Rational(3, 5), Rational(4, 5)}};
    ExteriorForm w = projection_volume_form(2, basis);
    std::vector<RatVec> arg{{1, 0}};
    if (!(w.evaluate(arg) == Rational(3, 5))) return set_fail(c);
  });
  sb.run("projection/full-basis", [&](CaseResult& c) {
    std::vector<RatVec> basis{{1, 0}, {0, 1}};
    if (!(projection_volume_form(2, basis) == ExteriorForm::volume(2))) return set_fail(c);
  });
  sb.run("projection/non-orthonormal", [&](CaseResult& c) {
    std::vector<RatVec> basis{{1, 1}};
    try {
      projection_volume_form(2, basis);
      set_fail(c, json{{"expected", "Domain error"}});
    } catch (const CalcError&) {
    }
  });
}

// ---------------------------------------------------------------------------
// forms suite: pullbacks and the exterior derivative
// ---------------------------------------------------------------------------

void suite_forms(SuiteBuilder& sb, uint64_t seed, int samples) {
  Sampler s(seed * 0x9E3779B9u + 2);
  for (int i = 0; i < std::max(100, samples); ++i) {
    sb.run(idx3("linear-functorial", i), [&](CaseResult& c) {
      int n1 = (int)s.uniform_int(1, 4), n2 = (int)s.uniform_int(1, 4),
          n3 = (int)s.uniform_int(1, 4);
      int k = (int)s.uniform_int(0, std::min(2, n1));
      ExteriorForm w = random_exterior(s, n1, k);
      RatMat l = random_matrix(s, n1, n2);
      RatMat m = random_matrix(s, n2, n3);
      if (!(pullback_linear(mat_mul(l, m), w) == pullback_linear(m, pullback_linear(l, w))))
        return set_fail(c);
      if (i % 4 == 0) {
        // identity and homomorphism checks
        if (!(pullback_linear(mat_identity(n1), w) == w))
          return set_fail(c, json{{"law", "identity"}});
        ExteriorForm w2 = random_exterior(s, n1, (int)s.uniform_int(0, 2));
        if (!(pullback_linear(m, pullback_linear(l, wedge(w, w2))) ==
              wedge(pullback_linear(m, pullback_linear(l, w)),
                    pullback_linear(m, pullback_linear(l, w2)))))
          return set_fail(c, json{{"law", "homomorphism"}});
      }
    });
  }
  for (int i = 0; i < std::max(50, samples / 2); ++i) {
    sb.run(idx3("smooth-functorial", i), [&](CaseResult& c) {
      int a = (int)s.uniform_int(1, 3), b = (int)s.uniform_int(1, 3),
          d = (int)s.uniform_int(1, 3);
      int k = (int)s.uniform_int(0, std::min(2, d));
      DifferentialForm w = random_diff_form(s, d, k, 2);
      SmoothMap f = random_poly_map(s, b, d, 2);
      SmoothMap g = random_poly_map(s, a, b, 2);
      if (!(pullback_smooth(compose(f, g), w) == pullback_smooth(g, pullback_smooth(f, w))))
        return set_fail(c);
      if (i % 4 == 0) {
        DifferentialForm w2 = random_diff_form(s, d, (int)s.uniform_int(0, 1), 1);
        if (!(pullback_smooth(f, wedge_forms(w, w2)) ==
              wedge_forms(pullback_smooth(f, w), pullback_smooth(f, w2))))
          return set_fail(c, json{{"law", "wedge-distribution"}});
        // pointwise consistency with the linear pullback through the jacobian
        RatVec x = s.vector(b, 2, 2);
        ExteriorForm lhs = pullback_smooth(f, w).eval_at(x);
        ExteriorForm rhs = pullback_linear(f.jacobian(x), w.eval_at(f.eval(x)));
        if (!(lhs == rhs)) return set_fail(c, json{{"law", "jacobian-consistency"}});
      }
    });
  }
  for (int i = 0; i < std::max(100, samples); ++i) {
    sb.run(idx3("exterior-derivative", i), [&](CaseResult& c) {
      int dim = (int)s.uniform_int(1, 4);
      int k = (int)s.uniform_int(0, std::min(2, dim));
      DifferentialForm w = random_diff_form(s, dim, k, 4);
      if (!exterior_derivative(exterior_derivative(w)).is_zero())
        return set_fail(c, json{{"law", "dd-zero"}});
      DifferentialForm b = random_diff_form(s, dim, (int)s.uniform_int(0, 1), 3);
      DifferentialForm lhs = exterior_derivative(wedge_forms(w, b));
      DifferentialForm rhs = wedge_forms(exterior_derivative(w), b) +
                             wedge_forms(w, exterior_derivative(b)).scaled(
                                 Rational(k % 2 == 0 ? 1 : -1));
      if (!(lhs == rhs)) return set_fail(c, json{{"law", "antiderivation"}});
    });
  }
  for (int i = 0; i < std::max(64, samples); ++i) {
    sb.run(idx3("module-equivalence", i), [&](CaseResult& c) {
      int dim = (int)s.uniform_int(1, 3);
      int k = (int)s.uniform_int(1, dim);
      DifferentialForm w = random_diff_form(s, dim, k, 2);
      std::vector<VectorFieldOnBox> fields;
      for (int j = 0; j < k; ++j) {
        std::vector<PolyExpr> comps;
        for (int v = 0; v < dim; ++v) comps.push_back(random_poly(s, dim, 2, 2));
        fields.emplace_back(Box::whole(dim), std::move(comps));
      }
      PolyExpr applied = apply_to_fields(w, fields);
      RatVec x = s.vector(dim, 2, 2);
      std::vector<RatVec> at_x;
      for (const auto& f : fields) at_x.push_back(f.eval(x));
      if (!(applied.eval(x) == w.eval_at(x).evaluate(at_x)))
        return set_fail(c, json{{"law", "pointwise-vs-module"}});
      // smooth-function linearity in the first slot
      PolyExpr f = random_poly(s, dim, 2, 2);
      auto scaled_fields = fields;
      scaled_fields[0] = fields[0].scaled_by(f);
      if (!(apply_to_fields(w, scaled_fields) == f * applied))
        return set_fail(c, json{{"law", "module-linearity"}});
      // vanishing-point well-definedness
      RatVec x0 = s.vector(dim, 2, 1);
      auto vanishing = fields;
      std::vector<PolyExpr> comps;
      for (int v = 0; v < dim; ++v) {
        PolyExpr acc(dim);
        for (int u = 0; u < dim; ++u) {
          PolyExpr factor = PolyExpr::variable(dim, u) - PolyExpr::constant(dim, x0[u]);
          acc += factor * random_poly(s, dim, 1, 2);
        }
        comps.push_back(acc);
      }
      vanishing[0] = VectorFieldOnBox(Box::whole(dim), std::move(comps));
      if (!(apply_to_fields(w, vanishing).eval(x0) == 0))
        return set_fail(c, json{{"law", "vanishing-witness"}});
    });
  }
  for (int i = 0; i < 32; ++i) {
    sb.run(idx3("metric-dual", i), [&](CaseResult& c) {
      int dim = (int)s.uniform_int(1, 3);
      RatMat a = random_matrix(s, dim, dim);
      RatMat g = mat_mul(mat_transpose(a), a);
      for (int d = 0; d < dim; ++d) g[d][d] += 1;  // SPD
      DifferentialForm w(Box::whole(dim), 1);
      for (int d = 0; d < dim; ++d)
        w.add_coeff(MultiIndex({d}), random_poly(s, dim, 2, 2));
      VectorFieldOnBox eta = metric_dual(w, g);
      // omega(xi) == xi^T g eta for a random field xi
      std::vector<PolyExpr> comps;
      for (int v = 0; v < dim; ++v) comps.push_back(random_poly(s, dim, 2, 2));
      VectorFieldOnBox xi(Box::whole(dim), comps);
      PolyExpr lhs = apply_to_fields(w, std::vector<VectorFieldOnBox>{xi});
      PolyExpr rhs(dim);
      for (int r = 0; r < dim; ++r)
        for (int cc = 0; cc < dim; ++cc)
          rhs += xi.components[r] * eta.components[cc] * PolyExpr::constant(dim, g[r][cc]);
      if (!(lhs == rhs)) return set_fail(c);
    });
  }
  sb.run("gradient/euclidean", [&](CaseResult& c) {
    PolyExpr f = parse_poly("x0^2*x1 + 3*x1", 2);
    DifferentialForm df = differential_of_function(Box::whole(2), f);
    VectorFieldOnBox grad = metric_dual(df, mat_identity(2));
    if (!(grad.components[0] == f.partial(0) && grad.components[1] == f.partial(1)))
      return set_fail(c);
  });
  sb.run("gradient/scaled-metric", [&](CaseResult& c) {
    DifferentialForm dx0 = DifferentialForm::basis(Box::whole(2), MultiIndex({0}));
    RatMat g{{2, 0}, {0, 1}};
    VectorFieldOnBox eta = metric_dual(dx0, g);
    if (!(eta.components[0] == PolyExpr::constant(2, Rational(1, 2)) &&
          eta.components[1].is_zero()))
      return set_fail(c);
  });
}

// ---------------------------------------------------------------------------
// def21 suite: the four manifold definitions on atlas fixtures
// ---------------------------------------------------------------------------

PointwiseForm random_pointwise(Sampler& s, int dim, int degree) {
  return PointwiseForm::from_differential(random_diff_form(s, dim, degree, 2));
}

void def21_roundtrip(SuiteBuilder& sb, const std::string& tag, const AtlasSpace& m,
                     const PointwiseForm& omega, const Rational& tol, Sampler& s,
                     int points) {
  sb.run(tag + "/chart-roundtrip", [&](CaseResult& c) {
    ChartFormCollection coll = chart_collection_from_pointwise(m, omega);
    auto compat = collection_compatibility_check(m, coll);
    if (!compat.pass) return set_fail(c, json{{"stage", "compatibility"}, {"witness", compat.witness}});
    PointwiseForm back = pointwise_from_chart_collection(m, coll);
    auto members = m.space.sample_members(points, s);
    for (const auto& f : members)
      if (!pointwise_forms_agree_at(m, omega, back, f, tol))
        return set_fail(c, json{{"stage", "value"}, {"point", vec_to_json(f)}});
  });
  sb.run(tag + "/section-roundtrip", [&](CaseResult& c) {
    BundleSection s2 = section_from_pointwise(m, omega);
    PointwiseForm back = pointwise_from_section(m, s2);
    auto members = m.space.sample_members(points, s);
    for (const auto& f : members)
      if (!pointwise_forms_agree_at(m, omega, back, f, tol))
        return set_fail(c, json{{"point", vec_to_json(f)}});
  });
  sb.run(tag + "/chart-independence", [&](CaseResult& c) {
    ChartFormCollection coll = chart_collection_from_pointwise(m, omega);
    for (const auto& sample : m.atlas.overlap_samples) {
      int j = sample.chart_from;
      RatVec f = m.atlas.charts[j].forward.eval(sample.param);
      // rebuild through each chart containing f and compare
      std::optional<ExteriorForm> first;
      for (int i = 0; i < (int)m.atlas.charts.size(); ++i) {
        if (!m.atlas.chart_contains(i, f)) continue;
        RatVec u = m.atlas.charts[i].inverse.eval(f);
        ExteriorForm w =
            pullback_linear(m.atlas.charts[i].inverse.jacobian(f), coll.forms[i].at(u));
        if (!first) {
          first = w;
          continue;
        }
        auto frame = m.atlas.tangent_frame(f);
        std::vector<RatVec> vs(frame.begin(),
                               frame.begin() + std::min<size_t>(omega.degree, frame.size()));
        if ((int)vs.size() == omega.degree && !close(first->evaluate(vs), w.evaluate(vs), tol))
          return set_fail(c, json{{"point", vec_to_json(f)}});
      }
    }
  });
}

void suite_def21(SuiteBuilder& sb, uint64_t seed, int samples, const Rational& blackbox_tol) {
  Sampler s(seed * 0xD1B54A33u + 3);
  int points = std::max(8, samples / 8);
  {
    AtlasSpace plane = make_atlas_plane2();
    for (int rep = 0; rep < 3; ++rep) {
      for (int k : {1, 2}) {
        PointwiseForm w = random_pointwise(s, 2, k);
        def21_roundtrip(sb, "plane2/k" + std::to_string(k) + "/" + std::to_string(rep), plane,
                        w, 0, s, points);
      }
    }
    sb.run("plane2/atlas-coherence", [&](CaseResult& c) {
      for (int i = 0; i < 2; ++i) {
        SmoothMap t = plane.atlas.transition(i, i);
        if (!(t.components() == SmoothMap::identity(2).components())) return set_fail(c);
      }
      // cocycle: transition(0,1) o transition(1,0) = id at samples
      SmoothMap t01 = plane.atlas.transition(0, 1), t10 = plane.atlas.transition(1, 0);
      SmoothMap round = compose(t01, t10);
      if (!(round.components() == SmoothMap::identity(2).components())) return set_fail(c);
    });
  }
  {
    AtlasSpace circle = make_atlas_circle2();
    // the rotation-invariant 1-form restricted from the plane
    DifferentialForm wd(Box::whole(2), 1);
    wd.add_coeff(MultiIndex({0}), -PolyExpr::variable(2, 1));
    wd.add_coeff(MultiIndex({1}), PolyExpr::variable(2, 0));
    def21_roundtrip(sb, "circle2/angle-form", circle, PointwiseForm::from_differential(wd),
                    blackbox_tol, s, points);
    PointwiseForm w1 = random_pointwise(s, 2, 1);
    def21_roundtrip(sb, "circle2/random-1form", circle, w1, blackbox_tol, s, points);
  }
  {
    AtlasSpace sphere = make_atlas_sphere2();
    for (int k : {1, 2}) {
      PointwiseForm w = random_pointwise(s, 3, k);
      def21_roundtrip(sb, "sphere2/k" + std::to_string(k), sphere, w, blackbox_tol, s,
                      points);
    }
  }
}

// ---------------------------------------------------------------------------
// tds suite: tangent structures, probes, smooth maps, bump extension
// ---------------------------------------------------------------------------

void suite_tds(SuiteBuilder& sb, uint64_t seed, int samples) {
  Sampler s(seed * 0xA24BAED4u + 4);
  // diffeology axioms, sampled: constants at members are plaques (covering)
  // and accepted plaques stay accepted under polynomial precomposition.
  for (const char* name : {"euclidean:2", "axes", "lines", "tangent_planes"}) {
    sb.run(std::string(name) + "/diffeology-axioms", [&](CaseResult& c) {
      DiffSpace x = space_by_name(name);
      for (const auto& f : x.sample_members(4, s)) {
        SmoothMap konst = SmoothMap::constant(Box::whole(1), f);
        if (!is_plaque(x, konst).accepted) return set_fail(c, json{{"axiom", "covering"}});
        for (const auto& p : x.curve_family(f, 2, s)) {
          PolyExpr t = PolyExpr::variable(1, 0);
          PolyExpr phi = t.scaled(s.rational(2, 2)) + t.pow(2).scaled(s.rational(1, 2));
          SmoothMap pre = compose(p, SmoothMap(p.domain(), std::vector<PolyExpr>{phi}));
          if (!is_plaque(x, pre).accepted) return set_fail(c, json{{"axiom", "closure"}});
        }
      }
    });
  }
  for (int n : {1, 2, 3}) {
    DiffSpace x = make_euclidean(n);
    sb.run("euclidean" + std::to_string(n) + "/tangent-dim", [&](CaseResult& c) {
      for (const auto& f : x.sample_members(4, s)) {
        auto report = tangent_space(x, f, 2 * n + 2, s);
        if (report.dimension != n) return set_fail(c, json{{"point", vec_to_json(f)}});
        if (!report.union_of_branches_is_linear) return set_fail(c);
      }
    });
  }
  {
    DiffSpace x = make_euclidean(2);
    sb.run("euclidean2/consistency-precompose", [&](CaseResult& c) {
      for (int i = 0; i < std::max(16, samples / 4); ++i) {
        RatVec f = s.vector(2, 3, 2);
        SmoothMap p1 = random_poly_map(s, 1, 2, 2);
        // shift to base f
        RatVec v0 = p1.eval(RatVec{0});
        std::vector<PolyExpr> comps;
        for (int j = 0; j < 2; ++j)
          comps.push_back(p1.components()[j] + PolyExpr::constant(1, f[j] - v0[j]));
        p1 = SmoothMap(Box::whole(1), comps);
        // p2 differs by a second-order reparameterization
        PolyExpr t = PolyExpr::variable(1, 0);
        PolyExpr reparam = t + t.pow(2).scaled(s.rational(2, 2));
        SmoothMap p2 = compose(p1, SmoothMap(Box::whole(1), std::vector<PolyExpr>{reparam}));
        if (!equivalent(x, p1, p2, 1)) return set_fail(c, json{{"stage", "setup"}});
        PolyExpr phi = t.scaled(s.nonzero_rational(3, 2)) + t.pow(2).scaled(s.rational(2, 2));
        SmoothMap phim(Box::whole(1), std::vector<PolyExpr>{phi});
        if (!equivalent(x, compose(p1, phim), compose(p2, phim), 1))
          return set_fail(c, json{{"stage", "precomposition"}});
      }
    });
    sb.run("euclidean2/restriction-invariance", [&](CaseResult& c) {
      SmoothMap p = random_poly_map(s, 1, 2, 3);
      SmoothMap restricted(Box::centered(1, Rational(1, 8)), p.components());
      TangentVector a = tangent_class(x, p), b = tangent_class(x, restricted);
      if (!(a.signature == b.signature)) return set_fail(c);
    });
    sb.run("euclidean2/joint-plaque", [&](CaseResult& c) {
      RatVec f = s.vector(2, 3, 2);
      SmoothMap p1 = plaque_ray(SmoothMap::identity(2), f, s.nonzero_vector(2, 3, 1));
      SmoothMap p2 = plaque_ray(SmoothMap::identity(2), f, s.nonzero_vector(2, 3, 1));
      auto r = joint_plaque_probe(x, p1, p2, JointMode::Strong, 8);
      if (!r.found) return set_fail(c, probe_result_to_json(r));
    });
    sb.run("euclidean2/weaker-condition", [&](CaseResult& c) {
      // two (1+1)-plaques agreeing at s = 0
      SmoothMap base = random_poly_map(s, 1, 2, 2);
      PolyExpr r = PolyExpr::variable(2, 0), t = PolyExpr::variable(2, 1);
      std::vector<PolyExpr> p1c, p2c;
      for (int j = 0; j < 2; ++j) {
        PolyExpr b = base.components()[j].substitute(std::vector<PolyExpr>{r});
        p1c.push_back(b + t.scaled(s.rational(3, 2)) + (t * r).scaled(s.rational(2, 2)));
        p2c.push_back(b + t.scaled(s.rational(3, 2)) + t.pow(2).scaled(s.rational(2, 2)));
      }
      SmoothMap p1(Box::whole(2), p1c), p2(Box::whole(2), p2c);
      auto res = weaker_condition_probe(x, p1, p2, 8);
      if (!res.found) return set_fail(c, probe_result_to_json(res));
      auto same = weaker_condition_probe(x, p1, p1, 8);
      if (!same.found || same.strategy != "shared-plaque-parameter-sum")
        return set_fail(c, probe_result_to_json(same));
    });
    sb.run("euclidean2/locally-integrable", [&](CaseResult& c) {
      SpaceVectorField field;
      field.name = "poly-field";
      std::vector<PolyExpr> formula{random_poly(s, 2, 2, 2), random_poly(s, 2, 2, 2)};
      field.ambient_formula = formula;
      field.signature_at = [formula](const RatVec& p) {
        return RatVec{formula[0].eval(p), formula[1].eval(p)};
      };
      field.witness_at = [formula](const RatVec& p) {
        RatMat col(2, RatVec(1));
        col[0][0] = formula[0].eval(p);
        col[1][0] = formula[1].eval(p);
        return SmoothMap::linear(col, p);
      };
      SmoothMap p = random_poly_map(s, 1, 2, 2);
      auto res = locally_integrable_probe(x, field, p, RatVec{0}, 8);
      if (!res.found) return set_fail(c, probe_result_to_json(res));
    });
    sb.run("euclidean2/linear-continuous", [&](CaseResult& c) {
      auto rep = check_linear_continuous(x, samples, s);
      if (!rep.pass) return set_fail(c, check_report_to_json(rep));
    });
    sb.run("euclidean2/smooth-identity", [&](CaseResult& c) {
      auto rep = check_smooth_map(x, x, SmoothMap::identity(2), samples / 4 + 4, s);
      if (!rep.pass) return set_fail(c, check_report_to_json(rep));
    });
  }
  {
    DiffSpace axes = make_axes_union(true);
    sb.run("axes/membership", [&](CaseResult& c) {
      if (!axes.membership(RatVec{3, 0}).member) return set_fail(c);
      if (axes.membership(RatVec{3, 0}).branch != "x-axis") return set_fail(c);
      if (axes.membership(RatVec{1, 1}).member) return set_fail(c);
    });
    sb.run("axes/tangent-at-origin", [&](CaseResult& c) {
      auto rep = tangent_space(axes, RatVec{0, 0}, 8, s);
      if (rep.union_of_branches_is_linear) return set_fail(c, json{{"got", "linear"}});
      int nonzero = 0;
      for (const auto& b : rep.branches)
        if (b.dimension == 1) ++nonzero;
      if (nonzero != 2 || rep.dimension != 2)
        return set_fail(c, json{{"branches", nonzero}, {"dim", rep.dimension}});
    });
    sb.run("axes/tangent-off-origin", [&](CaseResult& c) {
      auto rep = tangent_space(axes, RatVec{1, 0}, 6, s);
      if (rep.dimension != 1 || !rep.union_of_branches_is_linear) return set_fail(c);
    });
    sb.run("axes/equivalence-orders", [&](CaseResult& c) {
      SmoothMap p1(Box::whole(1), std::vector<PolyExpr>{parse_poly("x0", 1), PolyExpr(1)});
      SmoothMap p2(Box::whole(1),
                   std::vector<PolyExpr>{parse_poly("x0 + x0^2", 1), PolyExpr(1)});
      if (!equivalent(axes, p1, p2, 1)) return set_fail(c, json{{"order", 1}});
      if (equivalent(axes, p1, p2, 2)) return set_fail(c, json{{"order", 2}});
      TangentVector tv = tangent_class(axes, p1);
      if (!(tv.signature == RatVec{1, 0})) return set_fail(c, json{{"stage", "signature"}});
      // doubling the parameter doubles the signature
      SmoothMap dbl(Box::whole(1),
                    std::vector<PolyExpr>{PolyExpr::variable(1, 0).scaled(2)});
      TangentVector tv2 = tangent_class(axes, compose(p1, dbl));
      if (!(tv2.signature == RatVec{2, 0})) return set_fail(c, json{{"stage", "chain-rule"}});
    });
    sb.run("axes/sum-map-smooth", [&](CaseResult& c) {
      DiffSpace line = make_euclidean(1);
      RatMat row{{1, 1}};
      auto rep = check_smooth_map(axes, line, SmoothMap::linear(row), 8, s);
      if (!rep.pass) return set_fail(c, check_report_to_json(rep));
    });
  }
  {
    DiffSpace lines = make_lines_plane();
    sb.run("lines/plaque-predicate", [&](CaseResult& c) {
      SmoothMap diag(Box::whole(1),
                     std::vector<PolyExpr>{parse_poly("x0", 1), parse_poly("x0", 1)});
      if (!is_plaque(lines, diag).accepted) return set_fail(c, json{{"case", "diagonal"}});
      SmoothMap parab(Box::whole(1),
                      std::vector<PolyExpr>{parse_poly("x0", 1), parse_poly("x0^2", 1)});
      if (is_plaque(lines, parab).accepted) return set_fail(c, json{{"case", "parabola"}});
      SmoothMap plane2(Box::whole(2), std::vector<PolyExpr>{parse_poly("x0 + x1", 2),
                                                            parse_poly("2*x0 + 2*x1", 2)});
      if (!is_plaque(lines, plane2).accepted) return set_fail(c, json{{"case", "2d-line"}});
      // closure under precomposition
      SmoothMap dbl(Box::whole(1),
                    std::vector<PolyExpr>{PolyExpr::variable(1, 0).scaled(2)});
      if (!is_plaque(lines, compose(diag, dbl)).accepted)
        return set_fail(c, json{{"case", "closure"}});
    });
    sb.run("lines/tangent-dim", [&](CaseResult& c) {
      auto rep = tangent_space(lines, s.vector(2, 3, 2), 8, s);
      if (rep.dimension != 2) return set_fail(c);
    });
    sb.run("lines/linear-continuous", [&](CaseResult& c) {
      auto rep = check_linear_continuous(lines, samples, s);
      if (!rep.pass) return set_fail(c, check_report_to_json(rep));
    });
    sb.run("lines/rotation-smooth", [&](CaseResult& c) {
      RatMat rot{{Rational(3, 5), Rational(-4, 5)}, {Rational(4, 5), Rational(3, 5)}};
      auto rep = check_smooth_map(lines, lines, SmoothMap::linear(rot), 8, s);
      if (!rep.pass) return set_fail(c, check_report_to_json(rep));
    });
  }
  {
    DiffSpace sheets = make_tangent_sheets();
    sb.run("sheets/strong-vs-weak", [&](CaseResult& c) {
      // plane curve and paraboloid curve through the tangency point
      SmoothMap p1(Box::whole(1), std::vector<PolyExpr>{parse_poly("x0", 1), PolyExpr(1),
                                                        PolyExpr(1)});
      SmoothMap p2(Box::whole(1), std::vector<PolyExpr>{PolyExpr(1), parse_poly("x0", 1),
                                                        parse_poly("x0^2", 1)});
      auto strong = joint_plaque_probe(sheets, p1, p2, JointMode::Strong, 8);
      if (strong.found) return set_fail(c, json{{"stage", "strong-found"}});
      if (!strong.obstruction || strong.obstruction->kind != "sheet-obstruction")
        return set_fail(c, json{{"stage", "certificate"}});
      auto weak = joint_plaque_probe(sheets, p1, p2, JointMode::Weak, 8);
      if (!weak.found) return set_fail(c, probe_result_to_json(weak));
    });
    sb.run("sheets/integrable-tangent-field", [&](CaseResult& c) {
      // xi = (x, y, 2z) is tangent to both sheets: on z = 0 the z slot
      // vanishes, on the paraboloid 2z = 2x*x + 2y*y.
      std::vector<PolyExpr> formula{PolyExpr::variable(3, 0), PolyExpr::variable(3, 1),
                                    PolyExpr::variable(3, 2).scaled(2)};
      SpaceVectorField field;
      field.name = "radial";
      field.ambient_formula = formula;
      auto formula_copy = formula;
      field.signature_at = [formula_copy](const RatVec& p) {
        RatVec v(3);
        for (int i = 0; i < 3; ++i) v[i] = formula_copy[i].eval(p);
        return v;
      };
      field.witness_at = [formula_copy](const RatVec& p) {
        RatMat col(3, RatVec(1));
        for (int i = 0; i < 3; ++i) col[i][0] = formula_copy[i].eval(p);
        return SmoothMap::linear(col, p);
      };
      // plaque in the paraboloid sheet
      PolyExpr t = PolyExpr::variable(1, 0);
      PolyExpr u = PolyExpr::constant(1, 1) + t, v = t.scaled(2);
      SmoothMap p(Box::whole(1), std::vector<PolyExpr>{u, v, u * u + v * v});
      auto res = locally_integrable_probe(sheets, field, p, RatVec{0}, 8);
      if (!res.found) return set_fail(c, probe_result_to_json(res));
    });
  }
  {
    // bump extension: the local-to-global argument for module forms
    sb.run("bump/containment-and-vanishing", [&](CaseResult& c) {
      VectorFieldOnBox local(Box::whole(2),
                             {random_poly(s, 2, 2, 2), random_poly(s, 2, 2, 2)});
      Box inner = Box::bounds(RatVec{-1, -1}, RatVec{1, 1});
      Box outer = Box::bounds(RatVec{-2, -2}, RatVec{2, 2});
      auto field = bump_extension(local, inner, outer);
      RatVec inside{Rational(1, 2), Rational(-1, 2)};
      if (!(field.signature_at(inside) == local.eval(inside)))
        return set_fail(c, json{{"stage", "agrees-inside"}});
      RatVec outside{3, 0};
      if (!(field.signature_at(outside) == RatVec{0, 0}))
        return set_fail(c, json{{"stage", "vanishes-outside"}});
      RatVec between{Rational(3, 2), 0};
      RatVec v = field.signature_at(between);
      (void)v;  // defined and finite in the transition band
    });
    sb.run("bump/vanishing-point-argument", [&](CaseResult& c) {
      // a field vanishing at x0 pairs to 0 with any form at x0
      for (int i = 0; i < 8; ++i) {
        RatVec x0 = s.vector(2, 1, 1);
        std::vector<PolyExpr> comps;
        for (int v = 0; v < 2; ++v) {
          PolyExpr acc(2);
          for (int u2 = 0; u2 < 2; ++u2)
            acc += (PolyExpr::variable(2, u2) - PolyExpr::constant(2, x0[u2])) *
                   random_poly(s, 2, 1, 2);
          comps.push_back(acc);
        }
        VectorFieldOnBox local(Box::whole(2), comps);
        Box inner = Box::bounds(RatVec{x0[0] - 1, x0[1] - 1}, RatVec{x0[0] + 1, x0[1] + 1});
        Box outer = Box::bounds(RatVec{x0[0] - 2, x0[1] - 2}, RatVec{x0[0] + 2, x0[1] + 2});
        auto field = bump_extension(local, inner, outer);
        DifferentialForm w = random_diff_form(s, 2, 1, 2);
        RatVec sig = field.signature_at(x0);
        std::vector<RatVec> args{sig};
        if (!(w.eval_at(x0).evaluate(args) == 0)) return set_fail(c);
      }
    });
  }
}

// ---------------------------------------------------------------------------
// psi suite: the bijection, its inverse, linearity, and the free-module remark
// ---------------------------------------------------------------------------

struct PsiFixture {
  DiffSpace space;
  // produce (F, tangent directions) samples adapted to the fixture
  std::function<std::pair<RatVec, std::vector<RatVec>>(int k, Sampler&)> sample;
  // produce a plaque for compatibility checks
  std::function<SmoothMap(Sampler&)> sample_plaque;
};

PsiFixture euclidean_psi_fixture(int n, DiffSpace space) {
  PsiFixture fx;
  fx.space = std::move(space);
  fx.sample = [n](int k, Sampler& s) {
    RatVec f = s.vector(n, 3, 2);
    std::vector<RatVec> dirs;
    for (int i = 0; i < k; ++i) dirs.push_back(s.vector(n, 3, 2));
    return std::make_pair(f, dirs);
  };
  fx.sample_plaque = [n](Sampler& s) {
    int arity = (int)s.uniform_int(1, 2);
    std::vector<PolyExpr> comps;
    for (int i = 0; i < n; ++i) comps.push_back(random_poly(s, arity, 2, 3));
    return SmoothMap(Box::whole(arity), std::move(comps));
  };
  return fx;
}

PsiFixture sheets_psi_fixture() {
  PsiFixture fx;
  fx.space = make_tangent_sheets();
  fx.sample = [](int k, Sampler& s) {
    // pick a sheet point and tangent directions within the sheet
    bool plane = s.coin();
    RatVec uv = s.vector(2, 2, 2);
    if (s.uniform_int(0, 4) == 0) uv = RatVec{0, 0};  // include the tangency point
    RatVec f = plane ? RatVec{uv[0], uv[1], 0}
                     : RatVec{uv[0], uv[1], uv[0] * uv[0] + uv[1] * uv[1]};
    std::vector<RatVec> dirs;
    for (int i = 0; i < k; ++i) {
      RatVec ab = s.vector(2, 3, 2);
      Rational dz = plane ? Rational(0) : 2 * f[0] * ab[0] + 2 * f[1] * ab[1];
      dirs.push_back(RatVec{ab[0], ab[1], dz});
    }
    return std::make_pair(f, dirs);
  };
  fx.sample_plaque = [](Sampler& s) {
    int arity = (int)s.uniform_int(1, 2);
    bool plane = s.coin();
    PolyExpr u = random_poly(s, arity, 2, 2), v = random_poly(s, arity, 2, 2);
    PolyExpr z = plane ? PolyExpr(arity) : u * u + v * v;
    return SmoothMap(Box::whole(arity), std::vector<PolyExpr>{u, v, z});
  };
  return fx;
}

void psi_roundtrip_block(SuiteBuilder& sb, const std::string& tag, const PsiFixture& fx,
                         uint64_t seed, int tuples) {
  Sampler s(seed);
  const DiffSpace& x = fx.space;
  int n = x.ambient_dim;
  sb.run(tag + "/roundtrip", [&](CaseResult& c) {
    for (int i = 0; i < tuples; ++i) {
      int k = (int)s.uniform_int(1, 2);
      PointwiseForm omega = random_pointwise(s, n, k);
      PlaqueIndexedForm big = psi(x, omega);
      auto [f, dirs] = fx.sample(k, s);
      Rational got = psi_inverse_at(x, big, f, dirs);
      Rational want = omega.at(f).evaluate(dirs);
      if (!(got == want))
        return set_fail(c, json{{"i", i},
                                {"point", vec_to_json(f)},
                                {"got", rational_to_string(got)},
                                {"want", rational_to_string(want)}});
    }
  });
  sb.run(tag + "/linearity", [&](CaseResult& c) {
    for (int i = 0; i < std::max(8, tuples / 4); ++i) {
      int k = (int)s.uniform_int(1, 2);
      PointwiseForm w1 = random_pointwise(s, n, k);
      PointwiseForm w2 = random_pointwise(s, n, k);
      PolyExpr f = random_poly(s, n, 2, 2);
      PlaqueIndexedForm sum = psi(x, w1 + w2);
      PlaqueIndexedForm scaled = psi(x, w1.scaled_by(f));
      PlaqueIndexedForm b1 = psi(x, w1), b2 = psi(x, w2);
      SmoothMap p = fx.sample_plaque(s);
      if (!(sum.assign(p) == b1.assign(p) + b2.assign(p)))
        return set_fail(c, json{{"law", "additive"}});
      PolyExpr f_along = f.substitute(p.components());
      if (!(scaled.assign(p) == b1.assign(p).scaled(f_along)))
        return set_fail(c, json{{"law", "function-linear"}});
    }
  });
  sb.run(tag + "/compatibility", [&](CaseResult& c) {
    for (int i = 0; i < tuples; ++i) {
      int k = (int)s.uniform_int(1, 2);
      PointwiseForm omega = random_pointwise(s, n, k);
      PlaqueIndexedForm big = psi(x, omega);
      SmoothMap p = fx.sample_plaque(s);
      SmoothMap phi = random_poly_map(s, (int)s.uniform_int(1, 2), p.source_dim(), 2);
      auto outcome = compatibility_check(big, p, phi);
      if (!outcome.pass) return set_fail(c, json{{"witness", outcome.witness}});
    }
  });
  sb.run(tag + "/tangent-condition", [&](CaseResult& c) {
    for (int i = 0; i < tuples; ++i) {
      int k = 1;
      PointwiseForm omega = random_pointwise(s, n, k);
      PlaqueIndexedForm big = psi(x, omega);
      SmoothMap p1 = fx.sample_plaque(s);
      int arity = p1.source_dim();
      // p2 = p1 o psi2 with psi2 fixing r1 to first order
      RatVec r1(arity, 0);
      std::vector<PolyExpr> re;
      for (int j = 0; j < arity; ++j) {
        PolyExpr v = PolyExpr::variable(arity, j);
        re.push_back(v + (v * v).scaled(s.rational(2, 2)));
      }
      SmoothMap p2 = compose(p1, SmoothMap(Box::whole(arity), re));
      std::vector<RatVec> dirs;
      for (int j = 0; j < k; ++j) dirs.push_back(s.vector(arity, 2, 2));
      RatVec extra = s.vector(arity, 2, 2);
      auto outcome = tangent_condition_check(x, big, p1, r1, p2, r1, dirs, extra);
      if (!outcome.pass) return set_fail(c, json{{"witness", outcome.witness}});
    }
  });
}

void suite_psi(SuiteBuilder& sb, uint64_t seed, int samples) {
  int tuples = std::max(50, samples);
  psi_roundtrip_block(sb, "euclidean2", euclidean_psi_fixture(2, make_euclidean(2)),
                      seed * 11 + 1, tuples);
  psi_roundtrip_block(sb, "euclidean3", euclidean_psi_fixture(3, make_euclidean(3)),
                      seed * 11 + 2, tuples);
  {
    AtlasSpace plane = make_atlas_plane2();
    psi_roundtrip_block(sb, "plane2", euclidean_psi_fixture(2, plane.space), seed * 11 + 3,
                        tuples);
  }
  psi_roundtrip_block(sb, "sheets", sheets_psi_fixture(), seed * 11 + 4, tuples);

  Sampler s(seed * 11 + 5);
  sb.run("sheets/value-independent-of-sheet", [&](CaseResult& c) {
    // at the tangency point the two sheet-spanning plaques must give one value
    DiffSpace x = make_tangent_sheets();
    for (int i = 0; i < 16; ++i) {
      PointwiseForm omega = random_pointwise(s, 3, 2);
      PlaqueIndexedForm big = psi(x, omega);
      std::vector<RatVec> dirs{{1, 0, 0}, {0, 1, 0}};
      auto plaques = build_spanning_plaques(x, RatVec{0, 0, 0}, dirs);
      if (plaques.size() < 2) return set_fail(c, json{{"stage", "need-two-sheets"}});
      // psi_inverse_at already cross-checks; run it for the value
      psi_inverse_at(x, big, RatVec{0, 0, 0}, dirs);
    }
  });
  sb.run("euclidean2/injectivity-witness", [&](CaseResult& c) {
    DiffSpace x = make_euclidean(2);
    for (int i = 0; i < 16; ++i) {
      PointwiseForm omega = random_pointwise(s, 2, 2);
      RatVec f = s.vector(2, 2, 2);
      std::vector<RatVec> dirs{{1, 0}, {0, 1}};
      Rational val = omega.at(f).evaluate(dirs);
      if (val == 0) continue;
      auto plaques = build_spanning_plaques(x, f, dirs);
      if (plaques.empty()) return set_fail(c, json{{"stage", "spanning"}});
      PlaqueIndexedForm big = psi(x, omega);
      RatVec e1{1, 0}, e2{0, 1};
      Rational got = big.assign(plaques[0]).eval_at(RatVec{0, 0}).evaluate(
          std::vector<RatVec>{e1, e2});
      if (got == 0) return set_fail(c, json{{"stage", "nonzero-witness"}});
    }
  });
  sb.run("euclidean2/inverse-smoothness", [&](CaseResult& c) {
    // r -> value(picked along a plaque with locally integrable fields) is the
    // same polynomial the module pairing computes.
    DiffSpace x = make_euclidean(2);
    for (int i = 0; i < 8; ++i) {
      int k = (int)s.uniform_int(1, 2);
      PointwiseForm omega = random_pointwise(s, 2, k);
      PlaqueIndexedForm big = psi(x, omega);
      SmoothMap p = random_poly_map(s, 1, 2, 2);
      std::vector<VectorFieldOnBox> fields;
      for (int j = 0; j < k; ++j)
        fields.emplace_back(Box::whole(2), std::vector<PolyExpr>{random_poly(s, 2, 2, 2),
                                                                 random_poly(s, 2, 2, 2)});
      // q(r, t) = p(r) + sum t_j xi_j(p(r))
      int vars = 1 + k;
      std::vector<PolyExpr> rvar{PolyExpr::variable(vars, 0)};
      std::vector<PolyExpr> lift;
      for (int j = 0; j < 2; ++j) lift.push_back(p.components()[j].substitute(rvar));
      std::vector<PolyExpr> qc = lift;
      for (int j = 0; j < k; ++j) {
        PolyExpr tj = PolyExpr::variable(vars, 1 + j);
        for (int a = 0; a < 2; ++a)
          qc[a] += tj * fields[j].components[a].substitute(lift);
      }
      SmoothMap q(Box::whole(vars), qc);
      DifferentialForm along = big.assign(q);
      std::vector<VectorFieldOnBox> tdirs;
      for (int j = 0; j < k; ++j) {
        std::vector<PolyExpr> comps(vars, PolyExpr(vars));
        comps[1 + j] = PolyExpr::constant(vars, 1);
        tdirs.emplace_back(Box::whole(vars), std::move(comps));
      }
      PolyExpr value_rt = apply_to_fields(along, tdirs);
      // substitute t = 0
      std::vector<PolyExpr> sub{PolyExpr::variable(1, 0)};
      for (int j = 0; j < k; ++j) sub.push_back(PolyExpr(1));
      PolyExpr value_r = value_rt.substitute(sub);
      PolyExpr direct =
          apply_to_fields(*omega.witness, fields).substitute(p.components());
      if (!(value_r == direct)) return set_fail(c, json{{"i", i}});
    }
  });
  sb.run("axes-punctured/branch-roundtrip", [&](CaseResult& c) {
    DiffSpace x = make_axes_union(false);
    for (int i = 0; i < 16; ++i) {
      PointwiseForm omega = random_pointwise(s, 2, 1);
      PlaqueIndexedForm big = psi(x, omega);
      Rational a = s.nonzero_rational(3, 1);
      RatVec f = s.coin() ? RatVec{a, 0} : RatVec{0, a};
      RatVec dir = f[1] == 0 ? RatVec{s.nonzero_rational(3, 2), 0}
                             : RatVec{0, s.nonzero_rational(3, 2)};
      Rational got = psi_inverse_at(x, big, f, {dir});
      Rational want = omega.at(f).evaluate(std::vector<RatVec>{dir});
      if (!(got == want)) return set_fail(c, json{{"i", i}});
    }
  });
  sb.run("lines/psi-refused", [&](CaseResult& c) {
    DiffSpace x = make_lines_plane();
    PointwiseForm omega = random_pointwise(s, 2, 1);
    try {
      psi(x, omega);
      set_fail(c, json{{"expected", "refusal"}});
    } catch (const CalcError&) {
    }
  });
  sb.run("lines/no-spanning-plaque", [&](CaseResult& c) {
    // the transversality obstruction reported through the inverse
    DiffSpace x = make_lines_plane();
    DifferentialForm w = random_diff_form(s, 2, 2, 1);
    PlaqueIndexedForm big;
    big.ambient_dim = 2;
    big.degree = 2;
    big.assign = [w](const SmoothMap& p) { return pullback_smooth(p, w); };
    int certs = 0;
    for (int i = 0; i < 20; ++i) {
      RatVec f = s.vector(2, 3, 2);
      std::vector<RatVec> dirs{s.nonzero_vector(2, 3, 1), s.nonzero_vector(2, 3, 1)};
      if (dirs[0][0] * dirs[1][1] - dirs[0][1] * dirs[1][0] == 0) continue;
      try {
        psi_inverse_at(x, big, f, dirs);
        return set_fail(c, json{{"stage", "expected-obstruction"}, {"i", i}});
      } catch (const NoSpanningPlaqueError&) {
        ++certs;
      }
    }
    if (certs < 10) return set_fail(c, json{{"certs", certs}});
  });
  // free-module remark: algebraic forms over the coordinate frame
  for (int n : {1, 2, 3}) {
    sb.run("free-module/euclidean" + std::to_string(n), [&](CaseResult& c) {
      for (int i = 0; i < 16; ++i) {
        int k = (int)s.uniform_int(1, std::min(2, n));
        DifferentialForm frame = random_diff_form(s, n, k, 2);
        CoordinateFrameForm alg{frame};
        // omega(sum f_i xi_i) = sum h_i f_i for k = 1
        if (k == 1) {
          std::vector<PolyExpr> fs;
          PolyExpr expect(n);
          std::vector<PolyExpr> comps(n, PolyExpr(n));
          for (int j = 0; j < n; ++j) {
            PolyExpr fj = random_poly(s, n, 2, 2);
            comps[j] = fj;
            expect += fj * frame.coeff(MultiIndex({j}));
          }
          VectorFieldOnBox xi(Box::whole(n), comps);
          if (!(alg.apply(std::vector<VectorFieldOnBox>{xi}) == expect))
            return set_fail(c, json{{"stage", "module-expansion"}});
        }
        // pointwise correspondence
        PointwiseForm pw = algebraic_to_pointwise(alg);
        RatVec f = s.vector(n, 2, 2);
        std::vector<VectorFieldOnBox> fields;
        std::vector<RatVec> at_f;
        for (int j = 0; j < k; ++j) {
          std::vector<PolyExpr> comps;
          for (int v = 0; v < n; ++v) comps.push_back(random_poly(s, n, 1, 2));
          fields.emplace_back(Box::whole(n), comps);
          at_f.push_back(fields.back().eval(f));
        }
        if (!(alg.apply(fields).eval(f) == pw.at(f).evaluate(at_f)))
          return set_fail(c, json{{"stage", "pointwise-agreement"}});
        // vanishing fields give vanishing values (the free-module argument)
        if (k == 1) {
          std::vector<PolyExpr> comps;
          for (int v = 0; v < n; ++v) {
            PolyExpr acc(n);
            for (int u = 0; u < n; ++u)
              acc += (PolyExpr::variable(n, u) - PolyExpr::constant(n, f[u])) *
                     random_poly(s, n, 1, 1);
            comps.push_back(acc);
          }
          VectorFieldOnBox xi(Box::whole(n), comps);
          if (!(alg.apply(std::vector<VectorFieldOnBox>{xi}).eval(f) == 0))
            return set_fail(c, json{{"stage", "vanishing"}});
        }
      }
    });
  }
  // pullbacks of the three kinds
  sb.run("pullbacks/pointwise-identity", [&](CaseResult& c) {
    PointwiseForm w = random_pointwise(s, 2, 1);
    PointwiseForm back = pullback_pointwise(SmoothMap::identity(2), w);
    RatVec f = s.vector(2, 2, 2);
    std::vector<RatVec> v{s.vector(2, 2, 2)};
    if (!(back.at(f).evaluate(v) == w.at(f).evaluate(v))) return set_fail(c);
  });
  sb.run("pullbacks/pointwise-constant", [&](CaseResult& c) {
    PointwiseForm w = random_pointwise(s, 2, 1);
    SmoothMap h = SmoothMap::constant(Box::whole(2), RatVec{1, 1});
    PointwiseForm back = pullback_pointwise(h, w);
    RatVec f = s.vector(2, 2, 2);
    std::vector<RatVec> v{s.vector(2, 2, 2)};
    if (!(back.at(f).evaluate(v) == 0)) return set_fail(c);
  });
  sb.run("pullbacks/plaque-indexed-matches-psi", [&](CaseResult& c) {
    DiffSpace x2 = make_euclidean(2);
    SmoothMap h = random_poly_map(s, 2, 2, 2);
    for (int i = 0; i < 8; ++i) {
      PointwiseForm w = random_pointwise(s, 2, 1);
      PlaqueIndexedForm big = psi(x2, w);
      PlaqueIndexedForm pulled = pullback_plaque_indexed(h, big);
      PointwiseForm hw = pullback_pointwise(h, w);
      PlaqueIndexedForm expect = psi(make_euclidean(2), hw);
      SmoothMap p = random_poly_map(s, 1, 2, 2);
      if (!(pulled.assign(p) == expect.assign(p))) return set_fail(c, json{{"i", i}});
    }
  });
  sb.run("pullbacks/algebraic-linear-surjection", [&](CaseResult& c) {
    // h : R^2 -> R, h(x, y) = x + 2y, right inverse y = 0, x = t
    RatMat m{{1, 2}};
    SmoothMap h = SmoothMap::linear(m);
    RatMat right{{1}, {0}};
    DifferentialForm frame = random_diff_form(s, 1, 1, 2);
    CoordinateFrameForm alg{frame};
    CoordinateFrameForm pulled = pullback_algebraic(h, alg, right);
    // compare with the pointwise route
    PointwiseForm pw = pullback_pointwise(h, algebraic_to_pointwise(alg));
    RatVec f = s.vector(2, 2, 2);
    std::vector<RatVec> v{s.vector(2, 2, 2)};
    Rational lhs = algebraic_to_pointwise(pulled).at(f).evaluate(v);
    Rational rhs = pw.at(f).evaluate(v);
    if (!(lhs == rhs)) return set_fail(c);
    // a non-surjective differential is rejected
    RatMat bad{{0, 0}};
    try {
      pullback_algebraic(SmoothMap::linear(bad), alg, right);
      return set_fail(c, json{{"expected", "SurjectivityNotWitnessed"}});
    } catch (const CalcError&) {
    }
  });
}

// ---------------------------------------------------------------------------
// counterexamples suite: the axes, lines, and sphere-parallel claims
// ---------------------------------------------------------------------------

SmoothMap great_circle_arc(double phi, bool north) {
  // t -> (sin t cos phi, sin t sin phi, +-cos t): crosses the pole with
  // nonzero velocity; not a plaque of the parallels fixture.
  BlackBoxFn bb;
  bb.name = "great-circle-arc";
  double zsign = north ? 1.0 : -1.0;
  bb.fn = [phi, zsign](const std::vector<double>& t) {
    double u = t[0];
    return std::vector<double>{std::sin(u) * std::cos(phi), std::sin(u) * std::sin(phi),
                               zsign * std::cos(u)};
  };
  return SmoothMap(Box::centered(1, Rational(1, 2)), 3, std::move(bb));
}

void suite_counterexamples(SuiteBuilder& sb, uint64_t seed, int samples) {
  Sampler s(seed * 31 + 7);
  {
    DiffSpace axes = make_axes_union(true);
    auto ce = axes_union_counterexample(axes);
    sb.run("axes/value-at-origin", [&](CaseResult& c) {
      if (!(ce.value_of_xi1_at_origin == 1))
        return set_fail(c, json{{"got", rational_to_string(ce.value_of_xi1_at_origin)}});
    });
    sb.run("axes/field-vanishes-at-origin", [&](CaseResult& c) {
      if (!(ce.xi1_signature_at_origin == RatVec{0, 0}))
        return set_fail(c, json{{"got", vec_to_json(ce.xi1_signature_at_origin)}});
    });
    sb.run("axes/no-pointwise-preimage", [&](CaseResult& c) {
      // any pointwise candidate evaluates the zero signature to 0, never 1
      for (int i = 0; i < 8; ++i) {
        ExteriorForm candidate = random_exterior(s, 2, 1);
        std::vector<RatVec> zero{RatVec{0, 0}};
        if (!(candidate.evaluate(zero) == 0)) return set_fail(c);
      }
      if (ce.value_of_xi1_at_origin == 0) return set_fail(c);
    });
    sb.run("axes/value-off-origin", [&](CaseResult& c) {
      AxesFunction f = ce.form.apply(ce.xi1);
      if (!(f.eval(RatVec{1, 0}) == 2))
        return set_fail(c, json{{"got", rational_to_string(f.eval(RatVec{1, 0}))}});
    });
    sb.run("axes/additivity-and-scalars", [&](CaseResult& c) {
      for (int i = 0; i < 16; ++i) {
        PolyExpr f1 = random_poly(s, 1, 2, 2) * PolyExpr::variable(1, 0);
        PolyExpr f2 = random_poly(s, 1, 2, 2) * PolyExpr::variable(1, 0);
        PolyExpr g1 = random_poly(s, 1, 2, 2) * PolyExpr::variable(1, 0);
        PolyExpr g2 = random_poly(s, 1, 2, 2) * PolyExpr::variable(1, 0);
        AxesField a(f1, f2), b(g1, g2), sum(f1 + g1, f2 + g2);
        AxesFunction fa = ce.form.apply(a), fb = ce.form.apply(b), fs = ce.form.apply(sum);
        if (!(fs.on_x == fa.on_x + fb.on_x && fs.on_y == fa.on_y + fb.on_y))
          return set_fail(c, json{{"law", "additivity"}});
        Rational r = s.rational(3, 2);
        AxesField scaled(f1.scaled(r), f2.scaled(r));
        AxesFunction fr = ce.form.apply(scaled);
        if (!(fr.on_x == fa.on_x.scaled(r) && fr.on_y == fa.on_y.scaled(r)))
          return set_fail(c, json{{"law", "scalar"}});
      }
    });
  }
  {
    DiffSpace lines = make_lines_plane();
    sb.run("lines/transversality-certificates", [&](CaseResult& c) {
      int found_certs = 0;
      for (int i = 0; i < std::max(20, samples / 3); ++i) {
        RatVec f = s.vector(2, 3, 2);
        RatVec d1 = s.nonzero_vector(2, 3, 1), d2 = s.nonzero_vector(2, 3, 1);
        if (d1[0] * d2[1] - d1[1] * d2[0] == 0) {
          --i;
          continue;
        }
        SmoothMap p1 = plaque_ray(SmoothMap::identity(2), f, d1);
        SmoothMap p2 = plaque_ray(SmoothMap::identity(2), f, d2);
        auto strong = joint_plaque_probe(lines, p1, p2, JointMode::Strong, 8);
        auto weak = joint_plaque_probe(lines, p1, p2, JointMode::Weak, 8);
        if (strong.found || weak.found) return set_fail(c, json{{"i", i}});
        if (!strong.obstruction || strong.obstruction->kind != "line-direction-obstruction")
          return set_fail(c, json{{"i", i}, {"stage", "certificate"}});
        if (!weak.obstruction) return set_fail(c, json{{"i", i}, {"stage", "weak"}});
        ++found_certs;
      }
      if (found_certs < 20) return set_fail(c, json{{"certs", found_certs}});
    });
    sb.run("lines/same-line-joins", [&](CaseResult& c) {
      RatVec f = s.vector(2, 3, 2);
      RatVec d = s.nonzero_vector(2, 3, 1);
      SmoothMap p1 = plaque_ray(SmoothMap::identity(2), f, d);
      RatVec d2{d[0] * 2, d[1] * 2};
      SmoothMap p2 = plaque_ray(SmoothMap::identity(2), f, d2);
      auto r = joint_plaque_probe(lines, p1, p2, JointMode::Strong, 8);
      if (!r.found) return set_fail(c, probe_result_to_json(r));
    });
    sb.run("lines/only-zero-field-integrable", [&](CaseResult& c) {
      // a generated family of degree <= 2 polynomial fields
      std::vector<std::vector<PolyExpr>> family;
      family.push_back({PolyExpr(2), PolyExpr(2)});  // the zero field
      for (int i = 0; i < 12; ++i)
        family.push_back({random_poly(s, 2, 2, 2), random_poly(s, 2, 2, 2)});
      for (size_t fi = 0; fi < family.size(); ++fi) {
        auto formula = family[fi];
        bool is_zero = formula[0].is_zero() && formula[1].is_zero();
        SpaceVectorField field;
        field.name = "candidate";
        field.ambient_formula = formula;
        field.signature_at = [formula](const RatVec& p) {
          return RatVec{formula[0].eval(p), formula[1].eval(p)};
        };
        field.witness_at = [formula](const RatVec& p) {
          RatMat col(2, RatVec(1));
          col[0][0] = formula[0].eval(p);
          col[1][0] = formula[1].eval(p);
          return SmoothMap::linear(col, p);
        };
        if (is_zero) {
          // integrable along every sampled plaque
          for (int i = 0; i < 4; ++i) {
            SmoothMap p = plaque_ray(SmoothMap::identity(2), s.vector(2, 2, 2),
                                     s.nonzero_vector(2, 2, 1));
            auto r = locally_integrable_probe(lines, field, p, RatVec{0}, 8);
            if (!r.found) return set_fail(c, json{{"stage", "zero-field"}});
          }
          continue;
        }
        // a nonzero field must fail somewhere: hunt a witness point where the
        // value is nonzero and pick a line not parallel to it
        bool failed_somewhere = false;
        for (int trial = 0; trial < 24 && !failed_somewhere; ++trial) {
          RatVec g = s.vector(2, 3, 2);
          RatVec val = field.signature_at(g);
          if (val[0] == 0 && val[1] == 0) continue;
          RatVec d{val[1] == 0 ? Rational(0) : Rational(1),
                   val[1] == 0 ? Rational(1) : Rational(0)};
          if (d[0] * val[1] - d[1] * val[0] == 0) d = RatVec{val[1], -val[0]};
          SmoothMap p = plaque_ray(SmoothMap::identity(2), g, d);
          auto r = locally_integrable_probe(lines, field, p, RatVec{0}, 8);
          if (!r.found) failed_somewhere = true;
        }
        if (!failed_somewhere)
          return set_fail(c, json{{"field", (int)fi}, {"stage", "expected-notfound"}});
      }
    });
  }
  {
    DiffSpace sphere = make_sphere_parallels();
    sb.run("sphere/poles-not-found", [&](CaseResult& c) {
      for (bool north : {true, false}) {
        SmoothMap p1 = great_circle_arc(0.0, north);
        SmoothMap p2 = great_circle_arc(1.5707963267948966, north);
        auto strong = joint_plaque_probe(sphere, p1, p2, JointMode::Strong, 8);
        auto weak = joint_plaque_probe(sphere, p1, p2, JointMode::Weak, 8);
        if (strong.found || weak.found) return set_fail(c, json{{"north", north}});
        if (!strong.obstruction || strong.obstruction->kind != "pole-transversality")
          return set_fail(c, json{{"north", north}, {"stage", "certificate"}});
      }
    });
    sb.run("sphere/pole-constants-join", [&](CaseResult& c) {
      RatVec pole{0, 0, 1};
      SmoothMap p1 = SmoothMap::constant(Box::whole(1), pole);
      SmoothMap p2 = SmoothMap::constant(Box::whole(1), pole);
      auto r = joint_plaque_probe(sphere, p1, p2, JointMode::Strong, 8);
      if (!r.found) return set_fail(c, probe_result_to_json(r));
    });
    sb.run("sphere/non-pole-joins", [&](CaseResult& c) {
      auto members = sphere.sample_members(4, s);
      for (const auto& f : members) {
        SmoothMap p1 = sphere_parallel_plaque(f, 1.0);
        SmoothMap p2 = sphere_parallel_plaque(f, -0.5);
        auto r = joint_plaque_probe(sphere, p1, p2, JointMode::Strong, 8);
        if (!r.found) return set_fail(c, probe_result_to_json(r));
      }
    });
    sb.run("sphere/parallel-field-integrable", [&](CaseResult& c) {
      SpaceVectorField field = sphere_tangential_field();
      auto members = sphere.sample_members(10, s);
      int found = 0;
      for (const auto& f : members) {
        SmoothMap p = sphere_parallel_plaque(f, 1.0);
        auto r = locally_integrable_probe(sphere, field, p, RatVec{0}, 8);
        if (r.found) ++found;
      }
      if (found < 10) return set_fail(c, json{{"found", found}});
      // the same field vanishes (as a tangent prescription) at the poles
      RatVec at_pole = field.signature_at(RatVec{0, 0, 1});
      if (!(at_pole == RatVec{0, 0, 0})) return set_fail(c, json{{"stage", "pole-value"}});
      SmoothMap pole_plaque = SmoothMap::constant(Box::whole(1), RatVec{0, 0, 1});
      auto r = locally_integrable_probe(sphere, field, pole_plaque, RatVec{0}, 8);
      if (!r.found) return set_fail(c, json{{"stage", "pole-integrates-zero"}});
    });
    sb.run("sphere/nonzero-at-pole-fails", [&](CaseResult& c) {
      SpaceVectorField field;
      field.name = "constant-x";
      field.signature_at = [](const RatVec&) { return RatVec{1, 0, 0}; };
      field.witness_at = [](const RatVec& p) {
        RatMat col(3, RatVec(1, 0));
        col[0][0] = 1;
        return SmoothMap::linear(col, p);
      };
      SmoothMap pole_plaque = SmoothMap::constant(Box::whole(1), RatVec{0, 0, 1});
      auto r = locally_integrable_probe(sphere, field, pole_plaque, RatVec{0}, 8);
      if (r.found) return set_fail(c, json{{"stage", "expected-notfound"}});
      if (!r.obstruction) return set_fail(c, json{{"stage", "certificate"}});
    });
  }
}

// ---------------------------------------------------------------------------

}  // namespace

int Report::count(const std::string& status) const {
  int n = 0;
  for (const auto& c : cases)
    if (c.status == status) ++n;
  return n;
}

json Report::to_json(bool with_timings) const {
  json jcases = json::array();
  for (const auto& c : cases) {
    json e{{"id", c.id}, {"status", c.status}};
    if (!c.witness.is_null()) e["witness"] = c.witness;
    if (with_timings) e["time_ms"] = c.time_ms;
    jcases.push_back(e);
  }
  return json{{"suite", suite},
              {"seed", seed},
              {"samples", samples},
              {"cases", jcases},
              {"summary", json{{"pass", count("pass")},
                               {"fail", count("fail")},
                               {"error", count("error")},
                               {"total", (int)cases.size()}}}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"algebra", "forms",           "def21", "tds",
                                              "psi",     "counterexamples", "all"};
  return names;
}

Report run_suite(const std::string& suite, uint64_t seed, int samples,
                 const Rational& blackbox_tol) {
  Rational tol = blackbox_tol <= 0 ? Rational(1, 1000000000) : blackbox_tol;
  if (suite == "all") {
    Report all;
    all.suite = "all";
    all.seed = seed;
    all.samples = samples;
    for (const auto& name : suite_names()) {
      if (name == "all") continue;
      Report sub = run_suite(name, seed, samples, blackbox_tol);
      for (auto& c : sub.cases) {
        c.id = name + "/" + c.id;
        all.cases.push_back(std::move(c));
      }
    }
    std::sort(all.cases.begin(), all.cases.end(),
              [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
    return all;
  }
  SuiteBuilder sb(suite, seed, samples);
  if (suite == "algebra")
    suite_algebra(sb, seed, samples);
  else if (suite == "forms")
    suite_forms(sb, seed, samples);
  else if (suite == "def21")
    suite_def21(sb, seed, samples, tol);
  else if (suite == "tds")
    suite_tds(sb, seed, samples);
  else if (suite == "psi")
    suite_psi(sb, seed, samples);
  else if (suite == "counterexamples")
    suite_counterexamples(sb, seed, samples);
  else
    throw CalcError(ErrorKind::Schema, "unknown suite '" + suite + "'");
  return sb.take();
}

}  // namespace tdsc
