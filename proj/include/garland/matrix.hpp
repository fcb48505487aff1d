#ifndef GARLAND_MATRIX_HPP
#define GARLAND_MATRIX_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "finite_field.hpp"

namespace garland {

/// Dense square matrix over a finite field, row-major.
struct Matrix
{
  std::size_t n = 0;
  std::vector<FieldElement> entries;

  Matrix() = default;
  explicit Matrix(std::size_t size) : n(size), entries(size * size) {}

  static Matrix identity(std::size_t size)
  {
    Matrix m(size);
    for (std::size_t i = 0; i < size; ++i)
      m(i, i) = {1};
    return m;
  }

  FieldElement &operator()(std::size_t r, std::size_t c) { return entries[r * n + c]; }
  FieldElement operator()(std::size_t r, std::size_t c) const { return entries[r * n + c]; }

  friend bool operator==(const Matrix &, const Matrix &) = default;
};

inline Matrix multiply(const FieldTable &F, const Matrix &a, const Matrix &b)
{
  Matrix c(a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) {
      FieldElement s = F.zero();
      for (std::size_t k = 0; k < a.n; ++k)
        s = F.add(s, F.mul(a(i, k), b(k, j)));
      c(i, j) = s;
    }
  return c;
}

inline FieldElement determinant(const FieldTable &F, Matrix m)
{
  FieldElement det = F.one();
  for (std::size_t col = 0; col < m.n; ++col) {
    std::size_t piv = col;
    while (piv < m.n && m(piv, col).value == 0)
      ++piv;
    if (piv == m.n)
      return F.zero();
    if (piv != col) {
      for (std::size_t j = 0; j < m.n; ++j)
        std::swap(m(piv, j), m(col, j));
      det = F.neg(det);
    }
    det = F.mul(det, m(col, col));
    FieldElement inv = F.inv(m(col, col));
    for (std::size_t r = col + 1; r < m.n; ++r) {
      FieldElement f = F.mul(m(r, col), inv);
      if (f.value == 0)
        continue;
      for (std::size_t j = col; j < m.n; ++j)
        m(r, j) = F.sub(m(r, j), F.mul(f, m(col, j)));
    }
  }
  return det;
}

inline std::optional<Matrix> inverse(const FieldTable &F, Matrix m)
{
  std::size_t n = m.n;
  Matrix inv = Matrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m(piv, col).value == 0)
      ++piv;
    if (piv == n)
      return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(m(piv, j), m(col, j));
      std::swap(inv(piv, j), inv(col, j));
    }
    FieldElement s = F.inv(m(col, col));
    for (std::size_t j = 0; j < n; ++j) {
      m(col, j) = F.mul(m(col, j), s);
      inv(col, j) = F.mul(inv(col, j), s);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m(r, col).value == 0)
        continue;
      FieldElement f = m(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) = F.sub(m(r, j), F.mul(f, m(col, j)));
        inv(r, j) = F.sub(inv(r, j), F.mul(f, inv(col, j)));
      }
    }
  }
  return inv;
}

/// Rank of a list of row vectors by Gaussian elimination.
inline std::size_t rank(const FieldTable &F, std::vector<std::vector<FieldElement>> rows)
{
  if (rows.empty())
    return 0;
  std::size_t cols = rows.front().size(), r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c].value == 0)
      ++piv;
    if (piv == rows.size())
      continue;
    std::swap(rows[piv], rows[r]);
    FieldElement inv = F.inv(rows[r][c]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      FieldElement f = F.mul(rows[i][c], inv);
      if (f.value == 0)
        continue;
      for (std::size_t j = c; j < cols; ++j)
        rows[i][j] = F.sub(rows[i][j], F.mul(f, rows[r][j]));
    }
    ++r;
  }
  return r;
}

} // namespace garland

#endif // GARLAND_MATRIX_HPP
