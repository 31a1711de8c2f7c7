#pragma once

#include <optional>

#include "tdscalc/rational.hpp"

namespace tdsc {

/// Dense exact matrix, row-major. Small sizes only (dims <= 8 in practice).
using RatMat = std::vector<RatVec>;

inline RatMat mat_identity(size_t n) {
  RatMat m(n, RatVec(n, 0));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline size_t mat_rows(const RatMat& m) { return m.size(); }
inline size_t mat_cols(const RatMat& m) { return m.empty() ? 0 : m[0].size(); }

inline RatMat mat_mul(const RatMat& a, const RatMat& b) {
  if (mat_cols(a) != mat_rows(b))
    throw CalcError(ErrorKind::Dimension, "matrix product shape mismatch");
  RatMat out(mat_rows(a), RatVec(mat_cols(b), 0));
  for (size_t i = 0; i < mat_rows(a); ++i)
    for (size_t k = 0; k < mat_cols(a); ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < mat_cols(b); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

inline RatVec mat_vec(const RatMat& a, const RatVec& x) {
  if (mat_cols(a) != x.size())
    throw CalcError(ErrorKind::Dimension, "matrix-vector shape mismatch");
  RatVec out(mat_rows(a), 0);
  for (size_t i = 0; i < mat_rows(a); ++i)
    for (size_t j = 0; j < x.size(); ++j) out[i] += a[i][j] * x[j];
  return out;
}

inline RatMat mat_transpose(const RatMat& a) {
  RatMat out(mat_cols(a), RatVec(mat_rows(a)));
  for (size_t i = 0; i < mat_rows(a); ++i)
    for (size_t j = 0; j < mat_cols(a); ++j) out[j][i] = a[i][j];
  return out;
}

/// Exact determinant by fraction-free-ish Gaussian elimination with pivoting.
Rational mat_det(RatMat m);

/// Gauss-Jordan inverse; nullopt when singular.
std::optional<RatMat> mat_inverse(RatMat m);

int mat_rank(RatMat m);

/// Basis of the row space (nonzero rows of the reduced echelon form).
RatMat mat_row_basis(RatMat m);

/// Solve A x = b; nullopt when inconsistent or underdetermined.
std::optional<RatVec> mat_solve(RatMat a, RatVec b);

inline Rational dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw CalcError(ErrorKind::Dimension, "dot length mismatch");
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace tdsc
