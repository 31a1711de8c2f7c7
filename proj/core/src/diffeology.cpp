#include "tdscalc/diffeology.hpp"

#include <algorithm>
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

// Embedding R^n -> R^{n+m}, r -> (r, 0) or (0, s) depending on `front`.
SmoothMap slice_embedding(int total, int keep, bool front) {
  RatMat e(total, RatVec(keep, 0));
  for (int i = 0; i < keep; ++i) e[front ? i : total - keep + i][i] = 1;
  return SmoothMap::linear(e);
}

// Projection R^{total} -> R^{keep} onto the leading or trailing block; used
// to lift a plaque to a function of extra variables.
SmoothMap block_projection(int total, int keep, bool front) {
  RatMat e(keep, RatVec(total, 0));
  for (int i = 0; i < keep; ++i) e[i][front ? i : total - keep + i] = 1;
  return SmoothMap::linear(e);
}

}  // namespace

SmoothMap plaque_ray(const SmoothMap& p, const RatVec& r0, const RatVec& v) {
  if ((int)r0.size() != p.source_dim() || (int)v.size() != p.source_dim())
    throw CalcError(ErrorKind::Dimension, "plaque_ray point/direction dimension mismatch");
  RatMat col(p.source_dim(), RatVec(1));
  for (int i = 0; i < p.source_dim(); ++i) col[i][0] = v[i];
  return compose(p, SmoothMap::linear(col, r0));
}

PlaqueDecision is_plaque(const DiffSpace& x, const SmoothMap& m) {
  if (m.target_dim() != x.ambient_dim)
    throw CalcError(ErrorKind::Dimension, "map codomain != ambient dimension of space");
  return x.plaque_predicate(m);
}

TangentVector tangent_class(const DiffSpace& x, const SmoothMap& one_plaque) {
  if (one_plaque.source_dim() != 1)
    throw CalcError(ErrorKind::Contract, "tangent_class expects a 1-plaque");
  auto decision = is_plaque(x, one_plaque);
  if (!decision.accepted)
    throw CalcError(ErrorKind::Domain, "tangent_class: not a plaque: " + decision.reason);
  TangentVector tv;
  tv.base = one_plaque.eval(RatVec{0});
  tv.exact = one_plaque.is_polynomial();
  tv.signature.reserve(x.generators.size());
  for (const auto& gen : x.generators) {
    SmoothMap gen_map(Box::whole(x.ambient_dim), std::vector<PolyExpr>{gen});
    Jet j = jet_at_zero(compose(gen_map, one_plaque), 1);
    tv.signature.push_back(j.first_derivative(0)[0]);
    tv.exact = tv.exact && j.exact;
  }
  tv.witness = one_plaque;
  return tv;
}

/// Signature of an arbitrary curve (no plaque check); used by probes that
/// must answer realizability questions about prescribed, possibly
/// unrealizable, boundary data.
static RatVec curve_signature(const DiffSpace& x, const SmoothMap& curve) {
  RatVec sig;
  sig.reserve(x.generators.size());
  for (const auto& gen : x.generators) {
    SmoothMap gen_map(Box::whole(x.ambient_dim), std::vector<PolyExpr>{gen});
    Jet j = jet_at_zero(compose(gen_map, curve), 1);
    sig.push_back(j.first_derivative(0)[0]);
  }
  return sig;
}

bool equivalent(const DiffSpace& x, const SmoothMap& p1, const SmoothMap& p2, int order) {
  if (p1.source_dim() != p2.source_dim())
    throw CalcError(ErrorKind::Dimension, "equivalence needs plaques of the same arity");
  RatVec b1 = p1.eval(RatVec(p1.source_dim(), 0));
  RatVec b2 = p2.eval(RatVec(p2.source_dim(), 0));
  if (!close_vec(b1, b2, x.tol))
    throw CalcError(ErrorKind::Domain, "plaques have different base points");
  for (const auto& gen : x.generators) {
    SmoothMap gen_map(Box::whole(x.ambient_dim), std::vector<PolyExpr>{gen});
    Jet j1 = jet_at_zero(compose(gen_map, p1), order);
    Jet j2 = jet_at_zero(compose(gen_map, p2), order);
    if (!jets_match(j1, j2, x.tol)) return false;
  }
  return true;
}

namespace {

std::string branch_of_curve(const DiffSpace& x, const SmoothMap& curve) {
  // Probe a few parameter values inside the domain; a nonconstant curve
  // identifies its branch away from branch intersections.
  Rational half = curve.domain().bounded ? curve.domain().hi[0] : Rational(1, 4);
  for (int denom : {2, 4, 8}) {
    for (int sgn : {1, -1}) {
      RatVec t{half * Rational(sgn, denom)};
      if (!curve.domain().contains(t)) continue;
      RatVec pt = curve.eval(t);
      auto m = x.membership(pt);
      if (m.member && !m.branch.empty()) return m.branch;
    }
  }
  return x.membership(curve.eval(RatVec{0})).branch;
}

}  // namespace

TangentSpaceReport tangent_space(const DiffSpace& x, const RatVec& f, int probe_budget,
                                 Sampler& sampler) {
  if (!x.is_member(f))
    throw CalcError(ErrorKind::Domain, "tangent_space: point " + vec_str(f) + " not a member");
  TangentSpaceReport report;
  report.base = f;
  auto curves = x.curve_family(f, probe_budget, sampler);
  RatMat all_sigs;
  std::map<std::string, RatMat> by_branch;
  for (const auto& c : curves) {
    TangentVector tv = tangent_class(x, c);
    bool zero = true;
    for (const auto& v : tv.signature)
      if (v != 0) zero = false;
    all_sigs.push_back(tv.signature);
    if (!zero) by_branch[branch_of_curve(x, c)].push_back(tv.signature);
  }
  report.dimension = all_sigs.empty() ? 0 : mat_rank(all_sigs);
  report.basis = mat_row_basis(all_sigs);
  int nonzero_branches = 0;
  for (auto& [label, sigs] : by_branch) {
    BranchComponent bc;
    bc.label = label;
    bc.basis = mat_row_basis(sigs);
    bc.dimension = (int)bc.basis.size();
    if (bc.dimension > 0) ++nonzero_branches;
    report.branches.push_back(std::move(bc));
  }
  // The union of several proper branch lines is not a linear subspace.
  report.union_of_branches_is_linear = true;
  if (nonzero_branches > 1) {
    for (const auto& bc : report.branches)
      if (bc.dimension < report.dimension) report.union_of_branches_is_linear = false;
  }
  return report;
}

namespace {

// q restricted to the first block (s = 0) or second block (r = 0).
SmoothMap boundary_slice(const SmoothMap& q, int n, int m, bool first_block) {
  return compose(q, slice_embedding(n + m, first_block ? n : m, first_block));
}

struct BoundaryCheck {
  bool ok = false;
  std::string detail;
};

BoundaryCheck check_boundary(const DiffSpace& x, const SmoothMap& q, const SmoothMap& p1,
                             const SmoothMap& p2, JointMode mode) {
  int n = p1.source_dim(), m = p2.source_dim();
  SmoothMap qr = boundary_slice(q, n, m, true);
  SmoothMap qs = boundary_slice(q, n, m, false);
  if (mode == JointMode::Strong) {
    if (qr.is_polynomial() && p1.is_polynomial() && qs.is_polynomial() && p2.is_polynomial()) {
      if (!(qr.components() == p1.components())) return {false, "q(r,0) != p1(r)"};
      if (!(qs.components() == p2.components())) return {false, "q(0,s) != p2(s)"};
      return {true, ""};
    }
    // sampled comparison for black-box participants
    Rational tol = x.tol == 0 ? Rational(1, 1000000000) : x.tol;
    for (int d : {-3, 1, 2}) {
      RatVec r(n, Rational(d, 32));
      if (!close_vec(qr.eval(r), p1.eval(r), tol)) return {false, "q(r,0) != p1(r) at sample"};
      RatVec s(m, Rational(d, 32));
      if (!close_vec(qs.eval(s), p2.eval(s), tol)) return {false, "q(0,s) != p2(s) at sample"};
    }
    return {true, ""};
  }
  // Weak mode: first-order class agreement of the boundary slices.
  if (!equivalent(x, qr, p1, 1)) return {false, "[q(r,0)]_r != [p1(r)]_r"};
  if (!equivalent(x, qs, p2, 1)) return {false, "[q(0,s)]_s != [p2(s)]_s"};
  return {true, ""};
}

}  // namespace

ProbeResult joint_plaque_probe(const DiffSpace& x, const SmoothMap& p1, const SmoothMap& p2,
                               JointMode mode, int budget) {
  (void)budget;
  RatVec f1 = p1.eval(RatVec(p1.source_dim(), 0));
  RatVec f2 = p2.eval(RatVec(p2.source_dim(), 0));
  if (!close_vec(f1, f2, x.tol))
    throw CalcError(ErrorKind::Domain, "joint probe: base points differ: " + vec_str(f1) +
                                           " vs " + vec_str(f2));
  ProbeResult out;
  auto verify = [&](const SmoothMap& q, const std::string& strategy) -> bool {
    auto pd = is_plaque(x, q);
    if (!pd.accepted) return false;
    auto bc = check_boundary(x, q, p1, p2, mode);
    if (!bc.ok) return false;
    out.found = true;
    out.witness = q;
    out.strategy = strategy;
    return true;
  };
  if (x.joint_constructor) {
    auto q = x.joint_constructor(p1, p2, mode);
    if (q && verify(*q, "fixture-constructor")) return out;
  }
  if (p1.is_polynomial() && p2.is_polynomial()) {
    // Additive template q(r,s) = p1(r) + p2(s) - F.
    int n = p1.source_dim(), m = p2.source_dim();
    SmoothMap lift1 = compose(p1, block_projection(n + m, n, true));
    SmoothMap lift2 = compose(p2, block_projection(n + m, m, false));
    std::vector<PolyExpr> comps;
    comps.reserve(x.ambient_dim);
    for (int i = 0; i < x.ambient_dim; ++i) {
      PolyExpr c = lift1.components()[i] + lift2.components()[i];
      c -= PolyExpr::constant(n + m, f1[i]);
      comps.push_back(std::move(c));
    }
    SmoothMap q(Box::whole(n + m), std::move(comps));
    if (verify(q, "additive-template")) return out;
  }
  out.found = false;
  if (x.joint_obstruction) {
    if (auto cert = x.joint_obstruction(p1, p2, mode)) {
      out.obstruction = cert;
      out.strategy = "obstruction-analysis";
      return out;
    }
  }
  out.obstruction = ProbeCertificate{"search-exhausted",
                                     "no strategy produced a verified joint plaque"};
  out.strategy = "exhausted";
  return out;
}

ProbeResult weaker_condition_probe(const DiffSpace& x, const SmoothMap& p1,
                                   const SmoothMap& p2, int budget) {
  (void)budget;
  if (p1.source_dim() != p2.source_dim() || p1.source_dim() < 2)
    throw CalcError(ErrorKind::Dimension,
                    "weaker condition probe expects two (n+1)-plaques of equal arity");
  int n = p1.source_dim() - 1;
  // Shared base: p1(r,0) = p2(r,0).
  SmoothMap base1 = compose(p1, slice_embedding(n + 1, n, true));
  SmoothMap base2 = compose(p2, slice_embedding(n + 1, n, true));
  if (p1.is_polynomial() && p2.is_polynomial()) {
    if (!(base1.components() == base2.components()))
      throw CalcError(ErrorKind::Domain, "plaques do not agree at s = 0");
  }
  ProbeResult out;
  auto jets_ok = [&](const SmoothMap& q) -> bool {
    // [q(r,t1,0)]_{t1} = [p1(r,t1)]_{t1} and symmetrically, at sampled r.
    for (int d : {0, 1, -1, 2}) {
      RatVec r(n, Rational(d, 16));
      RatVec rq(n + 2, 0), rp(n + 1, 0);
      for (int i = 0; i < n; ++i) rq[i] = rp[i] = r[i];
      RatVec e1(n + 2, 0), e2(n + 2, 0), ep(n + 1, 0);
      e1[n] = 1;
      e2[n + 1] = 1;
      ep[n] = 1;
      RatVec s1 = curve_signature(x, plaque_ray(q, rq, e1));
      RatVec s2 = curve_signature(x, plaque_ray(q, rq, e2));
      RatVec w1 = curve_signature(x, plaque_ray(p1, rp, ep));
      RatVec w2 = curve_signature(x, plaque_ray(p2, rp, ep));
      if (!close_vec(s1, w1, x.tol) || !close_vec(s2, w2, x.tol)) return false;
    }
    return true;
  };
  auto verify = [&](const SmoothMap& q, const std::string& strategy) -> bool {
    if (!is_plaque(x, q).accepted) return false;
    if (!jets_ok(q)) return false;
    out.found = true;
    out.witness = q;
    out.strategy = strategy;
    return true;
  };
  if (p1.is_polynomial() && p2.is_polynomial()) {
    if (p1.components() == p2.components()) {
      // q(r, t1, t2) = p1(r, t1 + t2)
      RatMat a(n + 1, RatVec(n + 2, 0));
      for (int i = 0; i < n; ++i) a[i][i] = 1;
      a[n][n] = 1;
      a[n][n + 1] = 1;
      SmoothMap q = compose(p1, SmoothMap::linear(a));
      if (verify(q, "shared-plaque-parameter-sum")) return out;
    }
    // q(r, t1, t2) = p1(r, t1) + p2(r, t2) - p1(r, 0)
    RatMat a1(n + 1, RatVec(n + 2, 0)), a2(n + 1, RatVec(n + 2, 0)), a0(n + 1, RatVec(n + 2, 0));
    for (int i = 0; i < n; ++i) a1[i][i] = a2[i][i] = a0[i][i] = 1;
    a1[n][n] = 1;
    a2[n][n + 1] = 1;
    SmoothMap q1 = compose(p1, SmoothMap::linear(a1));
    SmoothMap q2 = compose(p2, SmoothMap::linear(a2));
    SmoothMap q0 = compose(p1, SmoothMap::linear(a0));
    std::vector<PolyExpr> comps;
    comps.reserve(x.ambient_dim);
    for (int i = 0; i < x.ambient_dim; ++i)
      comps.push_back(q1.components()[i] + q2.components()[i] - q0.components()[i]);
    SmoothMap q(Box::whole(n + 2), std::move(comps));
    if (verify(q, "additive-template")) return out;
  }
  out.found = false;
  if (x.joint_obstruction) {
    if (auto cert = x.joint_obstruction(p1, p2, JointMode::Weak)) {
      out.obstruction = cert;
      out.strategy = "obstruction-analysis";
      return out;
    }
  }
  out.obstruction =
      ProbeCertificate{"search-exhausted", "no strategy produced a verified joint plaque"};
  out.strategy = "exhausted";
  return out;
}

ProbeResult locally_integrable_probe(const DiffSpace& x, const SpaceVectorField& field,
                                     const SmoothMap& p, const RatVec& r0, int budget) {
  (void)budget;
  if (!p.domain().contains(r0))
    throw CalcError(ErrorKind::Domain, "r0 outside plaque domain");
  int n = p.source_dim();
  ProbeResult out;
  auto verify = [&](const SmoothMap& q, const std::string& strategy) -> bool {
    if (q.source_dim() != n + 1) return false;
    if (!is_plaque(x, q).accepted) return false;
    // q(r,0) = p(r)
    SmoothMap qr = compose(q, slice_embedding(n + 1, n, true));
    if (qr.is_polynomial() && p.is_polynomial()) {
      if (!(qr.components() == p.components())) return false;
    } else {
      Rational tol = x.tol == 0 ? Rational(1, 1000000000) : x.tol;
      for (int d : {0, 1, -1}) {
        RatVec r = r0;
        for (auto& c : r) c += Rational(d, 64);
        if (!close_vec(qr.eval(r), p.eval(r), tol)) return false;
      }
    }
    // transverse jet class matches the prescription near r0
    RatVec en(n + 1, 0);
    en[n] = 1;
    for (int d : {0, 1, -1, 2, -2}) {
      RatVec r = r0;
      for (auto& c : r) c += Rational(d, 64);
      if (!p.domain().contains(r)) continue;
      RatVec rq(n + 1, 0);
      for (int i = 0; i < n; ++i) rq[i] = r[i];
      RatVec got = curve_signature(x, plaque_ray(q, rq, en));
      RatVec want = field.signature_at(p.eval(r));
      if (!close_vec(got, want, x.tol)) return false;
    }
    out.found = true;
    out.witness = q;
    out.strategy = strategy;
    return true;
  };
  if (x.integrator) {
    auto q = x.integrator(field, p, r0);
    if (q && verify(*q, "fixture-integrator")) return out;
  }
  // Generic straight-line flow for polynomial ambient formulas.
  if (field.ambient_formula && p.is_polynomial()) {
    SmoothMap lift = compose(p, block_projection(n + 1, n, true));
    std::vector<PolyExpr> comps;
    comps.reserve(x.ambient_dim);
    PolyExpr t = PolyExpr::variable(n + 1, n);
    for (int i = 0; i < x.ambient_dim; ++i) {
      PolyExpr xi_along = (*field.ambient_formula)[i].substitute(lift.components());
      comps.push_back(lift.components()[i] + t * xi_along);
    }
    SmoothMap q(Box::whole(n + 1), std::move(comps));
    if (verify(q, "straight-line-flow")) return out;
  }
  out.found = false;
  RatVec base_val = field.signature_at(p.eval(r0));
  out.obstruction = ProbeCertificate{
      "not-integrable-along-plaque",
      "no plaque realizes the prescribed transverse classes near r0 = " + vec_str(r0) +
          " (field value " + vec_str(base_val) + ")"};
  out.strategy = "exhausted";
  return out;
}

void CheckReport::add(std::string id, bool ok, std::string witness) {
  if (!ok) pass = false;
  cases.push_back(CheckCase{std::move(id), ok, std::move(witness)});
}

CheckReport check_linear_continuous(const DiffSpace& x, int samples, Sampler& sampler) {
  if (!x.plaque_sum)
    throw CalcError(ErrorKind::Contract, "fixture lacks a plaque addition constructor");
  CheckReport report;
  report.name = "linear_continuous/" + x.name;
  auto members = x.sample_members(std::max(1, samples / 4), sampler);
  int case_id = 0;
  for (const auto& f : members) {
    auto curves = x.curve_family(f, 4, sampler);
    if (curves.size() < 2) continue;
    const SmoothMap& p1 = curves[0];
    const SmoothMap& p2 = curves[1];
    auto p12 = x.plaque_sum(p1, p2);
    if (!p12) continue;
    // Condition a: [p12 o phi] = [p1 o phi] + [p2 o phi] for reparameterizations.
    for (int k = 0; k < 2; ++k) {
      Rational a = sampler.nonzero_rational(3, 2);
      Rational b = sampler.rational(2, 2);
      // phi(u) = a u + b u^2 fixes 0
      PolyExpr phi = PolyExpr::variable(1, 0).scaled(a) +
                     PolyExpr::variable(1, 0).pow(2).scaled(b);
      SmoothMap phim(Box::whole(1), std::vector<PolyExpr>{phi});
      RatVec s12 = curve_signature(x, compose(*p12, phim));
      RatVec s1 = curve_signature(x, compose(p1, phim));
      RatVec s2 = curve_signature(x, compose(p2, phim));
      bool ok = true;
      for (size_t i = 0; i < s12.size(); ++i)
        if (!close(s12[i], s1[i] + s2[i], x.tol)) ok = false;
      report.add("a/" + std::to_string(case_id) + "/" + std::to_string(k), ok,
                 ok ? "" : "signature sum mismatch at " + vec_str(f));
    }
    // Condition b: scaling by c, including collapse at c = 0.
    for (Rational c : {Rational(2), Rational(-1, 2), Rational(0)}) {
      PolyExpr scaled_param = PolyExpr::variable(1, 0).scaled(c);
      SmoothMap cm(Box::whole(1), std::vector<PolyExpr>{scaled_param});
      RatVec sc = curve_signature(x, compose(p1, cm));
      RatVec s1 = curve_signature(x, p1);
      bool ok = true;
      for (size_t i = 0; i < sc.size(); ++i)
        if (!close(sc[i], c * s1[i], x.tol)) ok = false;
      report.add("b/" + std::to_string(case_id) + "/c=" + rational_to_string(c), ok,
                 ok ? "" : "scaling failed at " + vec_str(f));
    }
    // Continuity: fiberwise sum of two (1+1)-plaques sharing the base curve
    // r -> p1(r), realized by one plaque. Pairs whose construction leaves the
    // space are not admissible continuity instances and are skipped.
    if (p1.is_polynomial() && p2.is_polynomial()) {
      PolyExpr r = PolyExpr::variable(2, 0), s = PolyExpr::variable(2, 1);
      std::vector<PolyExpr> rs{r + s};
      std::vector<PolyExpr> ronly{r};
      auto shift = [&](const SmoothMap& p) {
        std::vector<PolyExpr> comps;
        for (const auto& c : p.components()) comps.push_back(c.substitute(rs));
        return comps;
      };
      auto base = [&](const SmoothMap& p) {
        std::vector<PolyExpr> comps;
        for (const auto& c : p.components()) comps.push_back(c.substitute(ronly));
        return comps;
      };
      // Second member of the pair: pb along the same class line (always
      // admissible), plus the independent curve when it stays admissible.
      std::vector<SmoothMap> partners;
      {
        PolyExpr doubled = PolyExpr::variable(1, 0).scaled(2);
        SmoothMap dbl(Box::whole(1), std::vector<PolyExpr>{doubled});
        partners.push_back(compose(p1, dbl));
        partners.push_back(p2);
      }
      int variant = 0;
      for (const auto& pb : partners) {
        auto c1 = shift(p1), c2 = shift(pb), b1 = base(p1), b2 = base(pb);
        std::vector<PolyExpr> q1c, q2c, q12c;
        for (int i = 0; i < x.ambient_dim; ++i) {
          q1c.push_back(c1[i]);                    // p1(r+s)
          q2c.push_back(c2[i] - b2[i] + b1[i]);    // pb-increment over the p1 base
          q12c.push_back(c1[i] + c2[i] - b2[i]);   // fiberwise sum
        }
        SmoothMap q1(Box::whole(2), q1c), q2(Box::whole(2), q2c), q12(Box::whole(2), q12c);
        ++variant;
        if (!is_plaque(x, q1).accepted || !is_plaque(x, q2).accepted) continue;
        bool ok = is_plaque(x, q12).accepted;
        if (ok) {
          for (int d : {0, 1, -2}) {
            RatVec rq{Rational(d, 16), Rational(0)};
            RatVec e{Rational(0), Rational(1)};
            RatVec v12 = curve_signature(x, plaque_ray(q12, rq, e));
            RatVec v1 = curve_signature(x, plaque_ray(q1, rq, e));
            RatVec v2 = curve_signature(x, plaque_ray(q2, rq, e));
            for (size_t i = 0; i < v12.size(); ++i)
              if (!close(v12[i], v1[i] + v2[i], x.tol)) ok = false;
          }
        }
        report.add("continuity/" + std::to_string(case_id) + "/" + std::to_string(variant),
                   ok, ok ? "" : "fiberwise sum not realized at " + vec_str(f));
      }
    }
    ++case_id;
  }
  return report;
}

CheckReport check_smooth_map(const DiffSpace& x, const DiffSpace& y, const SmoothMap& h,
                             int samples, Sampler& sampler) {
  if (h.source_dim() != x.ambient_dim || h.target_dim() != y.ambient_dim)
    throw CalcError(ErrorKind::Dimension, "map shape does not match the two spaces");
  CheckReport report;
  report.name = "smooth_map/" + x.name + "->" + y.name;
  auto members = x.sample_members(std::max(1, samples / 4), sampler);
  int case_id = 0;
  for (const auto& f : members) {
    RatVec hf = h.eval(f);
    report.add("members/" + std::to_string(case_id), y.is_member(hf),
               y.is_member(hf) ? "" : vec_str(hf) + " not a member of " + y.name);
    auto curves = x.curve_family(f, 3, sampler);
    int k = 0;
    for (const auto& p : curves) {
      SmoothMap hp = compose(h, p);
      auto pd = is_plaque(y, hp);
      report.add("plaques/" + std::to_string(case_id) + "/" + std::to_string(k),
                 pd.accepted, pd.accepted ? "" : pd.reason);
      // Equivalence preservation: p ~ p o phi with phi'(0) = 1.
      PolyExpr phi = PolyExpr::variable(1, 0) + PolyExpr::variable(1, 0).pow(2).scaled(
                                                    sampler.rational(2, 2));
      SmoothMap phim(Box::whole(1), std::vector<PolyExpr>{phi});
      SmoothMap p_re = compose(p, phim);
      bool equiv_src = equivalent(x, p, p_re, 1);
      bool equiv_dst = equivalent(y, hp, compose(h, p_re), 1);
      report.add("equivalence/" + std::to_string(case_id) + "/" + std::to_string(k),
                 !equiv_src || equiv_dst, "");
      ++k;
    }
    // Linearity of the signature map, via the fixture plaque sum.
    if (x.plaque_sum && curves.size() >= 2) {
      auto p12 = x.plaque_sum(curves[0], curves[1]);
      if (p12) {
        RatVec lhs = curve_signature(y, compose(h, *p12));
        RatVec a = curve_signature(y, compose(h, curves[0]));
        RatVec b = curve_signature(y, compose(h, curves[1]));
        bool ok = true;
        for (size_t i = 0; i < lhs.size(); ++i)
          if (!close(lhs[i], a[i] + b[i], y.tol)) ok = false;
        report.add("linearity/" + std::to_string(case_id), ok, "");
      }
    }
    ++case_id;
  }
  return report;
}

std::vector<SmoothMap> build_spanning_plaques(const DiffSpace& x, const RatVec& f,
                                              const std::vector<RatVec>& directions) {
  std::vector<SmoothMap> results;
  if (!x.spanning_plaques) return results;
  // Direct fixture constructions first.
  for (auto& q : x.spanning_plaques(f, directions)) results.push_back(std::move(q));
  if (directions.size() >= 2) {
    // Iterated pairwise joins of the single-direction witness curves.
    std::optional<SmoothMap> cur;
    auto first = x.spanning_plaques(f, {directions[0]});
    if (!first.empty()) cur = first[0];
    for (size_t i = 1; cur && i < directions.size(); ++i) {
      auto next = x.spanning_plaques(f, {directions[i]});
      if (next.empty()) {
        cur.reset();
        break;
      }
      ProbeResult r = joint_plaque_probe(x, *cur, next[0], JointMode::Weak, 8);
      if (!r.found) {
        cur.reset();
        break;
      }
      cur = r.witness;
    }
    if (cur) results.push_back(std::move(*cur));
  }
  // Drop exact duplicates (polynomial representation equality).
  std::vector<SmoothMap> unique;
  for (auto& q : results) {
    bool dup = false;
    for (const auto& u : unique)
      if (q.is_polynomial() && u.is_polynomial() && q.components() == u.components()) dup = true;
    if (!dup) unique.push_back(std::move(q));
  }
  return unique;
}

}  // namespace tdsc
