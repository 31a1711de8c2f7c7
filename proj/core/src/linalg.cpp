#include "tdscalc/linalg.hpp"

namespace tdsc {

Rational mat_det(RatMat m) {
  size_t n = mat_rows(m);
  if (n != mat_cols(m)) throw CalcError(ErrorKind::Dimension, "determinant of non-square matrix");
  if (n == 0) return 1;
  Rational det = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

std::optional<RatMat> mat_inverse(RatMat m) {
  size_t n = mat_rows(m);
  if (n != mat_cols(m)) throw CalcError(ErrorKind::Dimension, "inverse of non-square matrix");
  RatMat inv = mat_identity(n);
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    Rational d = m[col][col];
    for (size_t c = 0; c < n; ++c) {
      m[col][c] /= d;
      inv[col][c] /= d;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (size_t c = 0; c < n; ++c) {
        m[r][c] -= f * m[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

namespace {

// Reduced row echelon form in place; returns rank.
int rref(RatMat& m) {
  size_t rows = mat_rows(m), cols = mat_cols(m);
  size_t lead = 0;
  int rank = 0;
  for (size_t r = 0; r < rows && lead < cols; ++r) {
    size_t pivot = r;
    while (pivot < rows && m[pivot][lead] == 0) ++pivot;
    if (pivot == rows) {
      ++lead;
      --r;
      continue;
    }
    std::swap(m[pivot], m[r]);
    Rational d = m[r][lead];
    for (size_t c = 0; c < cols; ++c) m[r][c] /= d;
    for (size_t rr = 0; rr < rows; ++rr) {
      if (rr == r || m[rr][lead] == 0) continue;
      Rational f = m[rr][lead];
      for (size_t c = 0; c < cols; ++c) m[rr][c] -= f * m[r][c];
    }
    ++lead;
    ++rank;
  }
  return rank;
}

}  // namespace

int mat_rank(RatMat m) {
  if (m.empty()) return 0;
  return rref(m);
}

RatMat mat_row_basis(RatMat m) {
  if (m.empty()) return {};
  int rank = rref(m);
  RatMat basis;
  for (const auto& row : m) {
    bool nonzero = false;
    for (const auto& v : row)
      if (v != 0) { nonzero = true; break; }
    if (nonzero) basis.push_back(row);
    if ((int)basis.size() == rank) break;
  }
  return basis;
}

std::optional<RatVec> mat_solve(RatMat a, RatVec b) {
  size_t rows = mat_rows(a), cols = mat_cols(a);
  if (rows != b.size()) throw CalcError(ErrorKind::Dimension, "solve shape mismatch");
  for (size_t r = 0; r < rows; ++r) a[r].push_back(b[r]);
  rref(a);
  RatVec x(cols, 0);
  std::vector<bool> seen(cols, false);
  for (size_t r = 0; r < rows; ++r) {
    size_t lead = 0;
    while (lead < cols && a[r][lead] == 0) ++lead;
    if (lead == cols) {
      if (a[r][cols] != 0) return std::nullopt;  // inconsistent
      continue;
    }
    // Reject free variables: demand a unique solution.
    for (size_t c = lead + 1; c < cols; ++c)
      if (a[r][c] != 0) return std::nullopt;
    x[lead] = a[r][cols];
    seen[lead] = true;
  }
  for (size_t c = 0; c < cols; ++c)
    if (!seen[c]) return std::nullopt;  // underdetermined
  return x;
}

}  // namespace tdsc
