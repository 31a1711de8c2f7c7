#include "tdscalc/forms.hpp"

#include <functional>

namespace tdsc {

VectorFieldOnBox::VectorFieldOnBox(Box d, std::vector<PolyExpr> comps)
    : domain(std::move(d)), components(std::move(comps)) {
  if ((int)components.size() != domain.dim)
    throw CalcError(ErrorKind::Dimension, "vector field component count != dimension");
  for (const auto& c : components)
    if (c.num_vars() != domain.dim)
      throw CalcError(ErrorKind::Dimension, "vector field component variable count mismatch");
}

RatVec VectorFieldOnBox::eval(const RatVec& x) const {
  RatVec out(components.size());
  for (size_t i = 0; i < components.size(); ++i) out[i] = components[i].eval(x);
  return out;
}

VectorFieldOnBox VectorFieldOnBox::coordinate(int dim, int j) {
  std::vector<PolyExpr> comps(dim, PolyExpr(dim));
  comps[j] = PolyExpr::constant(dim, 1);
  return VectorFieldOnBox(Box::whole(dim), std::move(comps));
}

VectorFieldOnBox VectorFieldOnBox::scaled_by(const PolyExpr& f) const {
  std::vector<PolyExpr> comps;
  comps.reserve(components.size());
  for (const auto& c : components) comps.push_back(c * f);
  return VectorFieldOnBox(domain, std::move(comps));
}

VectorFieldOnBox VectorFieldOnBox::operator+(const VectorFieldOnBox& o) const {
  if (dim() != o.dim()) throw CalcError(ErrorKind::Dimension, "field sum dimension mismatch");
  std::vector<PolyExpr> comps;
  comps.reserve(components.size());
  for (size_t i = 0; i < components.size(); ++i) comps.push_back(components[i] + o.components[i]);
  return VectorFieldOnBox(domain, std::move(comps));
}

DifferentialForm::DifferentialForm(Box domain, int degree)
    : domain_(std::move(domain)), degree_(degree) {
  if (degree < 0) throw CalcError(ErrorKind::Contract, "negative form degree");
}

DifferentialForm DifferentialForm::basis(Box domain, const MultiIndex& index) {
  DifferentialForm f(domain, index.size());
  f.add_coeff(index, PolyExpr::constant(f.dim(), 1));
  return f;
}

DifferentialForm DifferentialForm::from_function(Box domain, const PolyExpr& f) {
  DifferentialForm out(domain, 0);
  out.add_coeff(MultiIndex{}, f);
  return out;
}

bool DifferentialForm::is_zero() const { return coeffs_.empty(); }

PolyExpr DifferentialForm::coeff(const MultiIndex& i) const {
  auto it = coeffs_.find(i);
  return it == coeffs_.end() ? PolyExpr(dim()) : it->second;
}

void DifferentialForm::add_coeff(const MultiIndex& i, const PolyExpr& c) {
  if (i.size() != degree_)
    throw CalcError(ErrorKind::Dimension, "multi-index length != form degree");
  if (!i.idx.empty() && i.idx.back() >= dim())
    throw CalcError(ErrorKind::Dimension, "multi-index entry exceeds dimension");
  if (c.num_vars() != dim())
    throw CalcError(ErrorKind::Dimension, "coefficient variable count != dimension");
  if (degree_ > dim()) return;
  if (c.is_zero()) return;
  auto [it, inserted] = coeffs_.emplace(i, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

ExteriorForm DifferentialForm::eval_at(const RatVec& x) const {
  if (!domain_.contains(x)) throw CalcError(ErrorKind::Domain, "point outside form domain");
  ExteriorForm out(dim(), degree_);
  for (const auto& [i, c] : coeffs_) out.add_coeff(i, c.eval(x));
  return out;
}

DifferentialForm& DifferentialForm::operator+=(const DifferentialForm& o) {
  if (dim() != o.dim() || degree_ != o.degree_)
    throw CalcError(ErrorKind::Dimension, "form sum shape mismatch");
  for (const auto& [i, c] : o.coeffs_) add_coeff(i, c);
  return *this;
}

DifferentialForm DifferentialForm::scaled(const PolyExpr& f) const {
  DifferentialForm out(domain_, degree_);
  for (const auto& [i, c] : coeffs_) out.add_coeff(i, c * f);
  return out;
}

DifferentialForm DifferentialForm::scaled(const Rational& c) const {
  return scaled(PolyExpr::constant(dim(), c));
}

PolyExpr apply_to_fields(const DifferentialForm& omega,
                         std::span<const VectorFieldOnBox> fields) {
  if ((int)fields.size() != omega.degree())
    throw CalcError(ErrorKind::Dimension, "expected " + std::to_string(omega.degree()) +
                                              " fields, got " + std::to_string(fields.size()));
  int n = omega.dim();
  for (const auto& f : fields)
    if (f.dim() != n) throw CalcError(ErrorKind::Dimension, "field dimension mismatch");
  int k = omega.degree();
  PolyExpr total(n);
  if (k == 0) {
    for (const auto& [i, c] : omega.coeffs()) total += c;
    return total;
  }
  // det over the polynomial ring by Laplace expansion (k <= 4 in practice).
  std::function<PolyExpr(std::vector<std::vector<const PolyExpr*>>&)> det =
      [&](std::vector<std::vector<const PolyExpr*>>& m) -> PolyExpr {
    size_t sz = m.size();
    if (sz == 1) return *m[0][0];
    PolyExpr acc(n);
    for (size_t r = 0; r < sz; ++r) {
      std::vector<std::vector<const PolyExpr*>> sub;
      sub.reserve(sz - 1);
      for (size_t rr = 0; rr < sz; ++rr) {
        if (rr == r) continue;
        std::vector<const PolyExpr*> row(m[rr].begin() + 1, m[rr].end());
        sub.push_back(std::move(row));
      }
      PolyExpr term = (*m[r][0]) * det(sub);
      if (r % 2 == 1) term = -term;
      acc += term;
    }
    return acc;
  };
  for (const auto& [index, c] : omega.coeffs()) {
    std::vector<std::vector<const PolyExpr*>> m(k, std::vector<const PolyExpr*>(k));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) m[a][b] = &fields[a].components[index.idx[b]];
    total += c * det(m);
  }
  return total;
}

DifferentialForm wedge_forms(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.dim() != b.dim())
    throw CalcError(ErrorKind::Dimension, "wedge of forms on different spaces");
  DifferentialForm out(a.domain(), a.degree() + b.degree());
  std::vector<int> merged;
  for (const auto& [ia, ca] : a.coeffs())
    for (const auto& [ib, cb] : b.coeffs()) {
      int sign = merge_sign(ia.idx, ib.idx, merged);
      if (sign == 0) continue;
      PolyExpr c = ca * cb;
      if (sign < 0) c = -c;
      out.add_coeff(MultiIndex(merged), c);
    }
  return out;
}

DifferentialForm pullback_smooth(const SmoothMap& f, const DifferentialForm& omega) {
  if (!f.is_polynomial())
    throw CalcError(ErrorKind::Contract, "pullback_smooth requires a polynomial map");
  if (f.target_dim() != omega.dim())
    throw CalcError(ErrorKind::Dimension, "pullback: map codomain != form dimension");
  const auto& comps = f.components();
  // df_i as degree-1 forms on the source.
  std::vector<DifferentialForm> dcomp;
  dcomp.reserve(comps.size());
  for (const auto& c : comps) dcomp.push_back(differential_of_function(f.domain(), c));
  DifferentialForm out(f.domain(), omega.degree());
  for (const auto& [index, a] : omega.coeffs()) {
    DifferentialForm term =
        DifferentialForm::from_function(f.domain(), a.substitute(comps));
    for (int b = 0; b < index.size(); ++b) term = wedge_forms(term, dcomp[index.idx[b]]);
    out += term;
  }
  return out;
}

DifferentialForm exterior_derivative(const DifferentialForm& omega) {
  int n = omega.dim();
  DifferentialForm out(omega.domain(), omega.degree() + 1);
  std::vector<int> merged;
  for (const auto& [index, a] : omega.coeffs()) {
    for (int j = 0; j < n; ++j) {
      PolyExpr da = a.partial(j);
      if (da.is_zero()) continue;
      std::vector<int> dj{j};
      int sign = merge_sign(dj, index.idx, merged);
      if (sign == 0) continue;
      if (sign < 0) da = -da;
      out.add_coeff(MultiIndex(merged), da);
    }
  }
  return out;
}

DifferentialForm differential_of_function(Box domain, const PolyExpr& f) {
  if (f.num_vars() != domain.dim)
    throw CalcError(ErrorKind::Dimension, "function variable count != domain dimension");
  DifferentialForm out(domain, 1);
  for (int j = 0; j < domain.dim; ++j)
    out.add_coeff(MultiIndex({j}), f.partial(j));
  return out;
}

VectorFieldOnBox metric_dual(const DifferentialForm& omega, const RatMat& g) {
  if (omega.degree() != 1)
    throw CalcError(ErrorKind::Contract, "metric dual is defined for 1-forms");
  int n = omega.dim();
  if ((int)mat_rows(g) != n || (int)mat_cols(g) != n)
    throw CalcError(ErrorKind::Dimension, "metric has wrong shape");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g[i][j] != g[j][i]) throw CalcError(ErrorKind::Domain, "metric is not symmetric");
  // positive definiteness via leading principal minors
  for (int k = 1; k <= n; ++k) {
    RatMat lead(k, RatVec(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) lead[i][j] = g[i][j];
    if (!(mat_det(lead) > 0))
      throw CalcError(ErrorKind::Domain, "metric is not positive definite");
  }
  auto ginv = mat_inverse(g);
  if (!ginv) throw CalcError(ErrorKind::Domain, "metric is singular");
  // eta_i = sum_j (g^-1)_{ij} c_j with polynomial coefficients c_j.
  std::vector<PolyExpr> c(n, PolyExpr(n));
  for (const auto& [index, a] : omega.coeffs()) c[index.idx[0]] = a;
  std::vector<PolyExpr> eta(n, PolyExpr(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) eta[i] += c[j].scaled((*ginv)[i][j]);
  return VectorFieldOnBox(omega.domain(), std::move(eta));
}

}  // namespace tdsc
