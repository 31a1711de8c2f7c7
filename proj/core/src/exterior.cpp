#include "tdscalc/exterior.hpp"

#include <functional>

namespace tdsc {

MultiIndex::MultiIndex(std::vector<int> v) : idx(std::move(v)) {
  for (size_t i = 0; i + 1 < idx.size(); ++i)
    if (idx[i] >= idx[i + 1])
      throw CalcError(ErrorKind::Contract, "multi-index not strictly increasing");
  for (int i : idx)
    if (i < 0) throw CalcError(ErrorKind::Contract, "negative multi-index entry");
}

std::vector<MultiIndex> MultiIndex::all(int dim, int k) {
  std::vector<MultiIndex> out;
  if (k < 0 || k > dim) return out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if ((int)cur.size() == k) {
      out.push_back(MultiIndex(cur));
      return;
    }
    for (int i = start; i < dim; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

int merge_sign(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  int inversions = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return 0;
    if (a[i] < b[j]) {
      out.push_back(a[i++]);
    } else {
      // b[j] jumps over the remaining entries of a
      inversions += (int)(a.size() - i);
      out.push_back(b[j++]);
    }
  }
  while (i < a.size()) out.push_back(a[i++]);
  while (j < b.size()) out.push_back(b[j++]);
  return (inversions % 2 == 0) ? 1 : -1;
}

ExteriorForm::ExteriorForm(int dim, int degree) : dim_(dim), degree_(degree) {
  if (degree < 0) throw CalcError(ErrorKind::Contract, "negative form degree");
}

ExteriorForm ExteriorForm::scalar(int dim, const Rational& c) {
  ExteriorForm f(dim, 0);
  f.add_coeff(MultiIndex{}, c);
  return f;
}

ExteriorForm ExteriorForm::basis(int dim, const MultiIndex& index) {
  ExteriorForm f(dim, index.size());
  f.add_coeff(index, 1);
  return f;
}

ExteriorForm ExteriorForm::covector(const RatVec& y) {
  ExteriorForm f((int)y.size(), 1);
  for (int i = 0; i < (int)y.size(); ++i)
    f.add_coeff(MultiIndex({i}), y[i]);
  return f;
}

ExteriorForm ExteriorForm::volume(int dim) {
  std::vector<int> v(dim);
  for (int i = 0; i < dim; ++i) v[i] = i;
  return basis(dim, MultiIndex(std::move(v)));
}

Rational ExteriorForm::coeff(const MultiIndex& i) const {
  auto it = coeffs_.find(i);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void ExteriorForm::add_coeff(const MultiIndex& i, const Rational& c) {
  if (i.size() != degree_)
    throw CalcError(ErrorKind::Dimension, "multi-index length != form degree");
  if (!i.idx.empty() && i.idx.back() >= dim_)
    throw CalcError(ErrorKind::Dimension, "multi-index entry exceeds ambient dimension");
  if (degree_ > dim_) return;  // forms of degree > dim are identically zero
  if (c == 0) return;
  auto [it, inserted] = coeffs_.emplace(i, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }
}

Rational ExteriorForm::evaluate(std::span<const RatVec> vectors) const {
  if ((int)vectors.size() != degree_)
    throw CalcError(ErrorKind::Dimension, "expected " + std::to_string(degree_) +
                                              " argument vectors, got " +
                                              std::to_string(vectors.size()));
  for (const auto& v : vectors)
    if ((int)v.size() != dim_)
      throw CalcError(ErrorKind::Dimension, "argument vector has wrong dimension");
  Rational total = 0;
  RatMat minor(degree_, RatVec(degree_));
  for (const auto& [index, c] : coeffs_) {
    for (int a = 0; a < degree_; ++a)
      for (int b = 0; b < degree_; ++b) minor[a][b] = vectors[a][index.idx[b]];
    total += c * mat_det(minor);
  }
  return total;
}

RatVec ExteriorForm::covector_components() const {
  if (degree_ != 1) throw CalcError(ErrorKind::Contract, "covector view needs degree 1");
  RatVec y(dim_, 0);
  for (const auto& [index, c] : coeffs_) y[index.idx[0]] = c;
  return y;
}

ExteriorForm& ExteriorForm::operator+=(const ExteriorForm& o) {
  if (dim_ != o.dim_ || degree_ != o.degree_)
    throw CalcError(ErrorKind::Dimension, "form sum shape mismatch");
  for (const auto& [i, c] : o.coeffs_) add_coeff(i, c);
  return *this;
}

ExteriorForm ExteriorForm::scaled(const Rational& c) const {
  ExteriorForm out(dim_, degree_);
  if (c == 0) return out;
  for (const auto& [i, v] : coeffs_) out.coeffs_.emplace(i, v * c);
  return out;
}

ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b) {
  if (a.dim() != b.dim())
    throw CalcError(ErrorKind::Dimension, "wedge of forms on different spaces");
  ExteriorForm out(a.dim(), a.degree() + b.degree());
  std::vector<int> merged;
  for (const auto& [ia, ca] : a.coeffs())
    for (const auto& [ib, cb] : b.coeffs()) {
      int sign = merge_sign(ia.idx, ib.idx, merged);
      if (sign == 0) continue;
      out.add_coeff(MultiIndex(merged), ca * cb * sign);
    }
  return out;
}

Rational decomposable_eval(std::span<const RatVec> covectors, std::span<const RatVec> vectors) {
  if (covectors.size() != vectors.size())
    throw CalcError(ErrorKind::Dimension, "covector/vector count mismatch");
  size_t k = covectors.size();
  RatMat m(k, RatVec(k));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) m[i][j] = dot(covectors[j], vectors[i]);
  return mat_det(m);
}

ExteriorForm projection_volume_form(int dim, const std::vector<RatVec>& basis) {
  if (basis.empty()) return ExteriorForm::scalar(dim, 1);
  for (const auto& b : basis)
    if ((int)b.size() != dim)
      throw CalcError(ErrorKind::Dimension, "basis vector has wrong dimension");
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i; j < basis.size(); ++j) {
      Rational g = dot(basis[i], basis[j]);
      if (g != (i == j ? 1 : 0))
        throw CalcError(ErrorKind::Domain, "projection basis is not orthonormal");
    }
  ExteriorForm out = ExteriorForm::covector(basis[0]);
  for (size_t j = 1; j < basis.size(); ++j)
    out = wedge(out, ExteriorForm::covector(basis[j]));
  return out;
}

ExteriorForm pullback_linear(const RatMat& l, const ExteriorForm& omega) {
  if ((int)mat_rows(l) != omega.dim())
    throw CalcError(ErrorKind::Dimension, "pullback matrix rows != form dimension");
  int w_dim = (int)mat_cols(l);
  ExteriorForm out(w_dim, omega.degree());
  if (omega.degree() == 0) {
    for (const auto& [i, c] : omega.coeffs()) out.add_coeff(i, c);
    return out;
  }
  // Coefficient at J = omega evaluated on the J-columns of L.
  std::vector<RatVec> cols(omega.degree());
  for (const auto& j : MultiIndex::all(w_dim, omega.degree())) {
    for (int b = 0; b < omega.degree(); ++b) {
      RatVec col(omega.dim());
      for (int r = 0; r < omega.dim(); ++r) col[r] = l[r][j.idx[b]];
      cols[b] = std::move(col);
    }
    out.add_coeff(j, omega.evaluate(cols));
  }
  return out;
}

}  // namespace tdsc
