#include "aaomg/dense.hpp"

#include "aaomg/error.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace aaomg {

DenseMatrix DenseMatrix::from_sparse(SparseMatrix const &m)
{
  DenseMatrix d(static_cast<std::size_t>(m.rows()),
                static_cast<std::size_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i) {
    auto const line = m.row(i);
    for (std::size_t p = 0; p < line.size(); ++p)
      d(static_cast<std::size_t>(i),
        static_cast<std::size_t>(line.indices[p])) = line.values[p];
  }
  return d;
}

Vector DenseMatrix::operator*(std::span<const double> x) const
{
  if (x.size() != cols_)
    throw DimensionMismatch("dense matvec: vector length does not match");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cols_; ++j)
      sum += (*this)(i, j) * x[j];
    y[i] = sum;
  }
  return y;
}

LuFactorization::LuFactorization(DenseMatrix a)
    : lu_(std::move(a)), pivots_(lu_.rows())
{
  auto const n = lu_.rows();
  if (lu_.cols() != n)
    throw DimensionMismatch("LU factorization needs a square matrix");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        piv = i;
      }
    if (best == 0.0)
      throw SingularMatrix("zero pivot in column " + std::to_string(k));
    pivots_[k] = piv;
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j)
        std::swap(lu_(k, j), lu_(piv, j));
    double const inv = 1.0 / lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      double const l = lu_(i, k) * inv;
      lu_(i, k) = l;
      if (l == 0.0)
        continue;
      for (std::size_t j = k + 1; j < n; ++j)
        lu_(i, j) -= l * lu_(k, j);
    }
  }
}

void LuFactorization::solve_in_place(std::span<double> b) const
{
  auto const n = lu_.rows();
  if (b.size() != n)
    throw DimensionMismatch("LU solve: right-hand side length mismatch");
  for (std::size_t k = 0; k < n; ++k)
    if (pivots_[k] != k)
      std::swap(b[k], b[pivots_[k]]);
  for (std::size_t i = 1; i < n; ++i) {
    double sum = b[i];
    for (std::size_t j = 0; j < i; ++j)
      sum -= lu_(i, j) * b[j];
    b[i] = sum;
  }
  for (std::size_t i = n; i-- > 0;) {
    double sum = b[i];
    for (std::size_t j = i + 1; j < n; ++j)
      sum -= lu_(i, j) * b[j];
    b[i] = sum / lu_(i, i);
  }
}

Vector LuFactorization::solve(std::span<const double> b) const
{
  Vector x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

Vector dense_lu_solve(DenseMatrix a, std::span<const double> b)
{
  return LuFactorization(std::move(a)).solve(b);
}

} // namespace aaomg
