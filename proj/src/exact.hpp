#pragma once
// Small exact integer linear algebra on __int128.

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coxnorm::exact {

using i128 = __int128;
using Matrix = std::vector<std::vector<i128>>;

inline i128 abs128(i128 v) { return v < 0 ? -v : v; }

// Bareiss fraction-free elimination.
inline i128 determinant(Matrix m) {
  const std::size_t n = m.size();
  i128 prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Inverse of an integer matrix with determinant +-1 (fraction-free Gauss-Jordan).
inline Matrix unimodular_inverse(const Matrix& a) {
  const std::size_t n = a.size();
  Matrix m(n, std::vector<i128>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
    m[i][n + i] = 1;
  }
  i128 prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) throw std::domain_error("singular matrix");
    std::swap(m[p], m[k]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0; j < 2 * n; ++j)
        if (j != k) m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  Matrix inv(n, std::vector<i128>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const i128 d = m[i][i];
    if (abs128(d) != 1) throw std::domain_error("matrix is not unimodular");
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j] / d;
  }
  return inv;
}

// Fraction-free Gauss-Jordan: returns (d, b) with a^-1 = b / d. Throws on a singular matrix.
inline std::pair<i128, Matrix> scaled_inverse(const Matrix& a) {
  const std::size_t n = a.size();
  Matrix m(n, std::vector<i128>(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
    m[i][n + i] = 1;
  }
  i128 prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) throw std::domain_error("singular matrix");
    std::swap(m[p], m[k]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      for (std::size_t j = 0; j < 2 * n; ++j)
        if (j != k) m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  Matrix b(n, std::vector<i128>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b[i][j] = m[i][n + j];
  return {prev, std::move(b)};
}

}  // namespace coxnorm::exact
