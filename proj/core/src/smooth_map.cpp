#include "tdscalc/smooth_map.hpp"

#include <algorithm>

namespace tdsc {

Box Box::centered(int dim, const Rational& half_width) {
  Box b;
  b.dim = dim;
  b.bounded = true;
  b.lo.assign(dim, -half_width);
  b.hi.assign(dim, half_width);
  return b;
}

Box Box::bounds(RatVec lo, RatVec hi) {
  if (lo.size() != hi.size()) throw CalcError(ErrorKind::Dimension, "box bounds length mismatch");
  Box b;
  b.dim = (int)lo.size();
  b.bounded = true;
  b.lo = std::move(lo);
  b.hi = std::move(hi);
  for (int i = 0; i < b.dim; ++i)
    if (!(b.lo[i] < b.hi[i])) throw CalcError(ErrorKind::Domain, "box is empty");
  return b;
}

bool Box::contains(const RatVec& p) const {
  if ((int)p.size() != dim) return false;
  if (!bounded) return true;
  for (int i = 0; i < dim; ++i)
    if (!(lo[i] < p[i] && p[i] < hi[i])) return false;
  return true;
}

bool Box::contains_box(const Box& inner) const {
  if (inner.dim != dim) return false;
  if (!bounded) return true;
  if (!inner.bounded) return false;
  for (int i = 0; i < dim; ++i)
    if (!(lo[i] < inner.lo[i] && inner.hi[i] < hi[i])) return false;
  return true;
}

SmoothMap::SmoothMap(Box domain, std::vector<PolyExpr> components)
    : domain_(std::move(domain)), target_dim_((int)components.size()),
      components_(std::move(components)) {
  for (const auto& c : components_)
    if (c.num_vars() != domain_.dim)
      throw CalcError(ErrorKind::Dimension, "component variable count != domain dimension");
}

SmoothMap::SmoothMap(Box domain, int target_dim, BlackBoxFn blackbox)
    : domain_(std::move(domain)), target_dim_(target_dim), blackbox_(std::move(blackbox)) {}

SmoothMap SmoothMap::identity(int n) {
  std::vector<PolyExpr> comps;
  comps.reserve(n);
  for (int i = 0; i < n; ++i) comps.push_back(PolyExpr::variable(n, i));
  return SmoothMap(Box::whole(n), std::move(comps));
}

SmoothMap SmoothMap::constant(Box domain, RatVec value) {
  std::vector<PolyExpr> comps;
  comps.reserve(value.size());
  for (const auto& v : value) comps.push_back(PolyExpr::constant(domain.dim, v));
  return SmoothMap(std::move(domain), std::move(comps));
}

SmoothMap SmoothMap::linear(const RatMat& a, RatVec offset) {
  int rows = (int)mat_rows(a), cols = (int)mat_cols(a);
  if (offset.empty()) offset.assign(rows, 0);
  if ((int)offset.size() != rows)
    throw CalcError(ErrorKind::Dimension, "offset length != matrix rows");
  std::vector<PolyExpr> comps;
  comps.reserve(rows);
  for (int i = 0; i < rows; ++i) {
    PolyExpr p = PolyExpr::constant(cols, offset[i]);
    for (int j = 0; j < cols; ++j)
      p += PolyExpr::variable(cols, j).scaled(a[i][j]);
    comps.push_back(std::move(p));
  }
  return SmoothMap(Box::whole(cols), std::move(comps));
}

const std::vector<PolyExpr>& SmoothMap::components() const {
  if (!is_polynomial())
    throw CalcError(ErrorKind::Contract, "black-box map has no polynomial components");
  return components_;
}

const BlackBoxFn& SmoothMap::blackbox() const {
  if (is_polynomial())
    throw CalcError(ErrorKind::Contract, "polynomial map has no black-box rule");
  return *blackbox_;
}

void SmoothMap::add_intermediate_check(IntermediateCheck check) {
  intermediate_checks_.push_back(std::move(check));
}

RatVec SmoothMap::eval(const RatVec& point) const {
  if ((int)point.size() != source_dim())
    throw CalcError(ErrorKind::Dimension, "evaluation point dimension mismatch");
  if (!domain_.contains(point))
    throw CalcError(ErrorKind::Domain, "point outside map domain");
  for (const auto& check : intermediate_checks_) {
    RatVec mid(check.inner.size());
    for (size_t i = 0; i < check.inner.size(); ++i) mid[i] = check.inner[i].eval(point);
    if (!check.required.contains(mid))
      throw CalcError(ErrorKind::Domain,
                      "intermediate point of a composition leaves the outer map's domain");
  }
  if (is_polynomial()) {
    RatVec out(target_dim_);
    for (int i = 0; i < target_dim_; ++i) out[i] = components_[i].eval(point);
    return out;
  }
  std::vector<double> p(point.size());
  for (size_t i = 0; i < point.size(); ++i) p[i] = to_double(point[i]);
  auto v = blackbox_->fn(p);
  if ((int)v.size() != target_dim_)
    throw CalcError(ErrorKind::Contract, "black-box rule returned wrong dimension");
  RatVec out(target_dim_);
  for (int i = 0; i < target_dim_; ++i) out[i] = rational_from_double(v[i]);
  return out;
}

std::vector<double> SmoothMap::eval_d(const std::vector<double>& point) const {
  if ((int)point.size() != source_dim())
    throw CalcError(ErrorKind::Dimension, "evaluation point dimension mismatch");
  if (!is_polynomial()) return blackbox_->fn(point);
  std::vector<double> out(target_dim_);
  for (int i = 0; i < target_dim_; ++i) {
    double s = 0;
    for (const auto& [e, c] : components_[i].terms()) {
      double t = to_double(c);
      for (int j = 0; j < source_dim(); ++j)
        for (int k = 0; k < e[j]; ++k) t *= point[j];
      s += t;
    }
    out[i] = s;
  }
  return out;
}

namespace {

// 5-point central first derivative of g along direction j at base.
double stencil_derivative(const std::function<double(const std::vector<double>&)>& g,
                          std::vector<double> base, int j, double h) {
  auto at = [&](double off) {
    std::vector<double> p = base;
    p[j] += off;
    return g(p);
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

// Numeric D^alpha via nested stencils.
double numeric_derivative(const SmoothMap& f, int comp, std::vector<int> alpha, double h) {
  std::function<double(const std::vector<double>&)> g =
      [&f, comp](const std::vector<double>& p) { return f.eval_d(p)[comp]; };
  // Peel one derivative at a time.
  std::function<double(const std::vector<double>&, std::vector<int>)> rec =
      [&](const std::vector<double>& p, std::vector<int> a) -> double {
    int j = -1;
    for (int i = 0; i < (int)a.size(); ++i)
      if (a[i] > 0) { j = i; break; }
    if (j < 0) return g(p);
    a[j] -= 1;
    auto inner = [&](const std::vector<double>& q) { return rec(q, a); };
    return stencil_derivative(inner, p, j, h);
  };
  return rec(std::vector<double>(f.source_dim(), 0.0), std::move(alpha));
}

}  // namespace

RatMat SmoothMap::jacobian(const RatVec& point) const {
  if ((int)point.size() != source_dim())
    throw CalcError(ErrorKind::Dimension, "jacobian point dimension mismatch");
  if (!domain_.contains(point))
    throw CalcError(ErrorKind::Domain, "point outside map domain");
  RatMat jac(target_dim_, RatVec(source_dim(), 0));
  if (is_polynomial()) {
    for (int i = 0; i < target_dim_; ++i)
      for (int j = 0; j < source_dim(); ++j)
        jac[i][j] = components_[i].partial(j).eval(point);
    return jac;
  }
  std::vector<double> p(point.size());
  for (size_t i = 0; i < point.size(); ++i) p[i] = to_double(point[i]);
  double h = blackbox_->step;
  for (int i = 0; i < target_dim_; ++i) {
    auto g = [this, i](const std::vector<double>& q) { return eval_d(q)[i]; };
    for (int j = 0; j < source_dim(); ++j)
      jac[i][j] = rational_from_double(stencil_derivative(g, p, j, h));
  }
  return jac;
}

bool SmoothMap::is_constant_map() const {
  if (is_polynomial()) {
    for (const auto& c : components_)
      if (c.degree() > 0) return false;
    return true;
  }
  return false;
}

SmoothMap compose(const SmoothMap& f, const SmoothMap& g) {
  if (g.target_dim() != f.source_dim())
    throw CalcError(ErrorKind::Dimension, "compose: codomain of inner map (" +
                                              std::to_string(g.target_dim()) +
                                              ") != domain of outer map (" +
                                              std::to_string(f.source_dim()) + ")");
  if (f.is_polynomial() && g.is_polynomial()) {
    std::vector<PolyExpr> comps;
    comps.reserve(f.target_dim());
    for (const auto& fc : f.components())
      comps.push_back(fc.substitute(g.components()));
    SmoothMap out(g.domain(), std::move(comps));
    // carry domain constraints for lazy evaluation-time checking
    for (const auto& check : g.intermediate_checks()) out.add_intermediate_check(check);
    if (f.domain().bounded)
      out.add_intermediate_check({g.components(), f.domain()});
    for (const auto& check : f.intermediate_checks()) {
      std::vector<PolyExpr> lifted;
      lifted.reserve(check.inner.size());
      for (const auto& c : check.inner) lifted.push_back(c.substitute(g.components()));
      out.add_intermediate_check({std::move(lifted), check.required});
    }
    return out;
  }
  BlackBoxFn bb;
  bb.step = std::min(f.fd_step(), g.fd_step());
  bb.name = "compose";
  bb.fn = [f, g](const std::vector<double>& x) { return f.eval_d(g.eval_d(x)); };
  return SmoothMap(g.domain(), f.target_dim(), std::move(bb));
}

std::vector<std::vector<int>> multi_indices_up_to(int dim, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(dim, 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == dim) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      cur[pos] = k;
      rec(pos + 1, remaining - k);
    }
    cur[pos] = 0;
  };
  rec(0, order);
  std::sort(out.begin(), out.end());
  return out;
}

const RatVec& Jet::value() const {
  auto it = coeffs.find(std::vector<int>(source_dim, 0));
  if (it == coeffs.end()) throw CalcError(ErrorKind::Contract, "jet missing order-0 entry");
  return it->second;
}

RatVec Jet::first_derivative(int var) const {
  std::vector<int> alpha(source_dim, 0);
  alpha[var] = 1;
  auto it = coeffs.find(alpha);
  if (it == coeffs.end()) throw CalcError(ErrorKind::Contract, "jet missing first-order entry");
  return it->second;
}

Jet jet_at_zero(const SmoothMap& f, int order) {
  RatVec origin(f.source_dim(), 0);
  if (!f.domain().contains(origin))
    throw CalcError(ErrorKind::Domain, "origin outside map domain");
  Jet jet;
  jet.source_dim = f.source_dim();
  jet.target_dim = f.target_dim();
  jet.order = order;
  jet.exact = f.is_polynomial();
  for (const auto& alpha : multi_indices_up_to(f.source_dim(), order)) {
    RatVec vals(f.target_dim());
    for (int c = 0; c < f.target_dim(); ++c) {
      if (f.is_polynomial())
        vals[c] = f.components()[c].derivative_at_zero(alpha);
      else {
        int total = 0;
        for (int a : alpha) total += a;
        if (total == 0)
          vals[c] = rational_from_double(f.eval_d(std::vector<double>(f.source_dim(), 0.0))[c]);
        else
          vals[c] = rational_from_double(numeric_derivative(f, c, alpha, f.fd_step()));
      }
    }
    jet.coeffs.emplace(alpha, std::move(vals));
  }
  return jet;
}

bool jets_match(const Jet& a, const Jet& b, const Rational& tol) {
  if (a.source_dim != b.source_dim || a.target_dim != b.target_dim || a.order != b.order)
    return false;
  Rational t = (a.exact && b.exact) ? tol : (tol == 0 ? Rational(1, 1000000) : tol);
  for (const auto& [alpha, va] : a.coeffs) {
    auto it = b.coeffs.find(alpha);
    if (it == b.coeffs.end()) return false;
    if (!close_vec(va, it->second, t)) return false;
  }
  return true;
}

PolyExpr jet_taylor(const Jet& jet, int comp) {
  PolyExpr p(jet.source_dim);
  for (const auto& [alpha, vals] : jet.coeffs) {
    Rational fact = 1;
    for (int a : alpha)
      for (int k = 2; k <= a; ++k) fact *= k;
    p.add_term(alpha, vals[comp] / fact);
  }
  return p;
}

}  // namespace tdsc
