#ifndef AAOMG_SPARSE_HPP
#define AAOMG_SPARSE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace aaomg {

using Index = std::int32_t;
using Vector = std::vector<double>;

struct Triplet
{
  Index row;
  Index col;
  double value;
};

/// Read-only view of one compressed row (or one column of a ColumnView).
struct SparseLine
{
  std::span<const Index> indices;
  std::span<const double> values;

  std::size_t size() const { return indices.size(); }
};

/// Immutable compressed-row matrix in canonical form: column indices strictly
/// increasing within each row and no explicitly stored zeros.
class SparseMatrix
{
public:
  SparseMatrix() = default;

  /// Duplicates are summed, exact zeros dropped.
  static SparseMatrix from_triplets(Index nrows, Index ncols,
                                    std::vector<Triplet> entries);
  static SparseMatrix identity(Index n);

  /// Takes raw CSR arrays and validates the canonical-form invariants.
  SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets,
               std::vector<Index> col_indices, std::vector<double> values);

  Index rows() const { return nrows_; }
  Index cols() const { return ncols_; }
  std::size_t nnz() const { return values_.size(); }
  std::size_t max_row_nnz() const;

  SparseLine row(Index i) const
  {
    auto const begin = static_cast<std::size_t>(row_offsets_[i]);
    auto const len = static_cast<std::size_t>(row_offsets_[i + 1]) - begin;
    return {std::span<const Index>(col_indices_).subspan(begin, len),
            std::span<const double>(values_).subspan(begin, len)};
  }

  /// Entry (i, j), zero when not stored.
  double at(Index i, Index j) const;
  Vector diagonal() const;

  std::span<const Index> row_offsets() const { return row_offsets_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  void matvec(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;

  SparseMatrix transpose() const;
  SparseMatrix scaled(double factor) const;
  /// Drops entries with |a_ij| <= relative_tol * max |a_ij|.
  SparseMatrix pruned(double relative_tol) const;

  bool operator==(SparseMatrix const &other) const = default;

private:
  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

/// Column access companion of a SparseMatrix; stores the transpose layout.
class ColumnView
{
public:
  explicit ColumnView(SparseMatrix const &m);

  Index rows() const { return transposed_.cols(); }
  Index cols() const { return transposed_.rows(); }
  SparseLine column(Index j) const { return transposed_.row(j); }

  /// Rebuild the original matrix from the column layout.
  SparseMatrix to_matrix() const { return transposed_.transpose(); }

private:
  SparseMatrix transposed_;
};

SparseMatrix multiply(SparseMatrix const &a, SparseMatrix const &b);
SparseMatrix add(SparseMatrix const &a, SparseMatrix const &b,
                 double scale_b = 1.0);

/// Diagonal of D diag(w_inv) D^T, i.e. r_i = sum_j D_ij^2 w_inv_j.
Vector sparse_triple_diag(SparseMatrix const &d, std::span<const double> w_inv);

/// Appends the entries of `block` shifted by (row_offset, col_offset).
void append_block(std::vector<Triplet> &out, SparseMatrix const &block,
                  Index row_offset, Index col_offset, double scale = 1.0);

void write_matrix_market(std::ostream &os, SparseMatrix const &m);

} // namespace aaomg

#endif
