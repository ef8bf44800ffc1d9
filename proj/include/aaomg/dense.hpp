#ifndef AAOMG_DENSE_HPP
#define AAOMG_DENSE_HPP

#include "aaomg/sparse.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace aaomg {

/// Small row-major dense matrix for coarse solves and local patch systems.
class DenseMatrix
{
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill)
  {
  }

  static DenseMatrix from_sparse(SparseMatrix const &m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double &operator()(std::size_t i, std::size_t j)
  {
    return values_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const
  {
    return values_[i * cols_ + j];
  }

  std::span<const double> values() const { return values_; }
  Vector operator*(std::span<const double> x) const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// LU factorization with partial (row) pivoting; handles symmetric
/// indefinite saddle-point blocks.
class LuFactorization
{
public:
  LuFactorization() = default;
  /// Throws SingularMatrix on an exactly zero pivot.
  explicit LuFactorization(DenseMatrix a);

  std::size_t size() const { return lu_.rows(); }
  void solve_in_place(std::span<double> b) const;
  Vector solve(std::span<const double> b) const;

private:
  DenseMatrix lu_;
  std::vector<std::size_t> pivots_;
};

Vector dense_lu_solve(DenseMatrix a, std::span<const double> b);

} // namespace aaomg

#endif
