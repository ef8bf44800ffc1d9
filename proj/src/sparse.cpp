#include "aaomg/sparse.hpp"

#include "aaomg/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

namespace aaomg {

SparseMatrix SparseMatrix::from_triplets(Index nrows, Index ncols,
                                         std::vector<Triplet> entries)
{
  if (nrows < 0 || ncols < 0)
    throw InvalidArgument("negative matrix dimension");
  for (auto const &t : entries)
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw DimensionMismatch("triplet (" + std::to_string(t.row) + ", " +
                              std::to_string(t.col) + ") outside " +
                              std::to_string(nrows) + "x" +
                              std::to_string(ncols) + " matrix");

  std::stable_sort(entries.begin(), entries.end(),
                   [](Triplet const &a, Triplet const &b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });

  std::vector<Index> offsets(static_cast<std::size_t>(nrows) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(entries.size());
  vals.reserve(entries.size());

  std::size_t pos = 0;
  while (pos < entries.size()) {
    auto const row = entries[pos].row;
    auto const col = entries[pos].col;
    double sum = 0.0;
    while (pos < entries.size() && entries[pos].row == row &&
           entries[pos].col == col)
      sum += entries[pos++].value;
    if (sum != 0.0) {
      cols.push_back(col);
      vals.push_back(sum);
      ++offsets[static_cast<std::size_t>(row) + 1];
    }
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(nrows); ++i)
    offsets[i + 1] += offsets[i];

  return SparseMatrix(nrows, ncols, std::move(offsets), std::move(cols),
                      std::move(vals));
}

SparseMatrix SparseMatrix::identity(Index n)
{
  std::vector<Index> offsets(static_cast<std::size_t>(n) + 1);
  std::vector<Index> cols(static_cast<std::size_t>(n));
  for (Index i = 0; i <= n; ++i)
    offsets[i] = i;
  for (Index i = 0; i < n; ++i)
    cols[i] = i;
  return SparseMatrix(n, n, std::move(offsets), std::move(cols),
                      std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

SparseMatrix::SparseMatrix(Index nrows, Index ncols,
                           std::vector<Index> row_offsets,
                           std::vector<Index> col_indices,
                           std::vector<double> values)
    : nrows_(nrows), ncols_(ncols), row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)), values_(std::move(values))
{
  if (row_offsets_.size() != static_cast<std::size_t>(nrows_) + 1 ||
      row_offsets_.front() != 0 ||
      static_cast<std::size_t>(row_offsets_.back()) != values_.size() ||
      col_indices_.size() != values_.size())
    throw DimensionMismatch("inconsistent compressed-row arrays");
  for (Index i = 0; i < nrows_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i])
      throw InvalidArgument("row offsets not nondecreasing");
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      if (col_indices_[p] < 0 || col_indices_[p] >= ncols_)
        throw DimensionMismatch("column index out of range");
      if (p > row_offsets_[i] && col_indices_[p] <= col_indices_[p - 1])
        throw InvalidArgument("column indices not strictly increasing");
      if (values_[p] == 0.0)
        throw InvalidArgument("explicitly stored zero");
    }
  }
}

std::size_t SparseMatrix::max_row_nnz() const
{
  std::size_t best = 0;
  for (Index i = 0; i < nrows_; ++i)
    best = std::max(best, row(i).size());
  return best;
}

double SparseMatrix::at(Index i, Index j) const
{
  auto const line = row(i);
  auto const it = std::lower_bound(line.indices.begin(), line.indices.end(), j);
  if (it == line.indices.end() || *it != j)
    return 0.0;
  return line.values[static_cast<std::size_t>(it - line.indices.begin())];
}

Vector SparseMatrix::diagonal() const
{
  Vector d(static_cast<std::size_t>(std::min(nrows_, ncols_)));
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = at(static_cast<Index>(i), static_cast<Index>(i));
  return d;
}

void SparseMatrix::matvec(std::span<const double> x, std::span<double> y) const
{
  if (x.size() != static_cast<std::size_t>(ncols_) ||
      y.size() != static_cast<std::size_t>(nrows_))
    throw DimensionMismatch("matvec: vector length does not match matrix");
  for (Index i = 0; i < nrows_; ++i) {
    double sum = 0.0;
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      sum += values_[p] * x[col_indices_[p]];
    y[i] = sum;
  }
}

Vector SparseMatrix::operator*(std::span<const double> x) const
{
  Vector y(static_cast<std::size_t>(nrows_));
  matvec(x, y);
  return y;
}

SparseMatrix SparseMatrix::transpose() const
{
  std::vector<Index> offsets(static_cast<std::size_t>(ncols_) + 1, 0);
  for (auto c : col_indices_)
    ++offsets[static_cast<std::size_t>(c) + 1];
  for (std::size_t j = 0; j < static_cast<std::size_t>(ncols_); ++j)
    offsets[j + 1] += offsets[j];

  std::vector<Index> cols(values_.size());
  std::vector<double> vals(values_.size());
  std::vector<Index> next(offsets.begin(), offsets.end() - 1);
  // Rows visited in increasing order keep each transposed row sorted.
  for (Index i = 0; i < nrows_; ++i)
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      auto const dst = next[col_indices_[p]]++;
      cols[dst] = i;
      vals[dst] = values_[p];
    }
  return SparseMatrix(ncols_, nrows_, std::move(offsets), std::move(cols),
                      std::move(vals));
}

SparseMatrix SparseMatrix::scaled(double factor) const
{
  if (factor == 0.0)
    return SparseMatrix(nrows_, ncols_,
                        std::vector<Index>(row_offsets_.size(), 0), {}, {});
  auto vals = values_;
  for (auto &v : vals)
    v *= factor;
  return SparseMatrix(nrows_, ncols_, row_offsets_, col_indices_,
                      std::move(vals));
}

SparseMatrix SparseMatrix::pruned(double relative_tol) const
{
  double biggest = 0.0;
  for (auto v : values_)
    biggest = std::max(biggest, std::abs(v));
  double const cut = relative_tol * biggest;
  std::vector<Index> offsets(row_offsets_.size(), 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(values_.size());
  vals.reserve(values_.size());
  for (Index i = 0; i < nrows_; ++i) {
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      if (std::abs(values_[p]) > cut) {
        cols.push_back(col_indices_[p]);
        vals.push_back(values_[p]);
      }
    offsets[i + 1] = static_cast<Index>(vals.size());
  }
  return SparseMatrix(nrows_, ncols_, std::move(offsets), std::move(cols),
                      std::move(vals));
}

ColumnView::ColumnView(SparseMatrix const &m) : transposed_(m.transpose()) {}

SparseMatrix multiply(SparseMatrix const &a, SparseMatrix const &b)
{
  if (a.cols() != b.rows())
    throw DimensionMismatch("multiply: inner dimensions differ");
  std::vector<Triplet> entries;
  std::vector<double> acc(static_cast<std::size_t>(b.cols()), 0.0);
  std::vector<char> used(static_cast<std::size_t>(b.cols()), 0);
  std::vector<Index> touched;
  for (Index i = 0; i < a.rows(); ++i) {
    auto const ra = a.row(i);
    for (std::size_t p = 0; p < ra.size(); ++p) {
      auto const rb = b.row(ra.indices[p]);
      for (std::size_t q = 0; q < rb.size(); ++q) {
        auto const j = rb.indices[q];
        if (!used[j]) {
          used[j] = 1;
          touched.push_back(j);
        }
        acc[j] += ra.values[p] * rb.values[q];
      }
    }
    for (auto j : touched) {
      entries.push_back({i, j, acc[j]});
      acc[j] = 0.0;
      used[j] = 0;
    }
    touched.clear();
  }
  return SparseMatrix::from_triplets(a.rows(), b.cols(), std::move(entries));
}

SparseMatrix add(SparseMatrix const &a, SparseMatrix const &b, double scale_b)
{
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("add: shapes differ");
  std::vector<Triplet> entries;
  entries.reserve(a.nnz() + b.nnz());
  append_block(entries, a, 0, 0);
  append_block(entries, b, 0, 0, scale_b);
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(entries));
}

Vector sparse_triple_diag(SparseMatrix const &d, std::span<const double> w_inv)
{
  if (w_inv.size() != static_cast<std::size_t>(d.cols()))
    throw DimensionMismatch("sparse_triple_diag: weight length != ncols");
  for (auto w : w_inv)
    if (!(w > 0.0))
      throw InvalidArgument("sparse_triple_diag: weights must be positive");
  Vector r(static_cast<std::size_t>(d.rows()), 0.0);
  for (Index i = 0; i < d.rows(); ++i) {
    auto const line = d.row(i);
    double sum = 0.0;
    for (std::size_t p = 0; p < line.size(); ++p)
      sum += line.values[p] * line.values[p] * w_inv[line.indices[p]];
    r[i] = sum;
  }
  return r;
}

void append_block(std::vector<Triplet> &out, SparseMatrix const &block,
                  Index row_offset, Index col_offset, double scale)
{
  for (Index i = 0; i < block.rows(); ++i) {
    auto const line = block.row(i);
    for (std::size_t p = 0; p < line.size(); ++p)
      out.push_back({i + row_offset, line.indices[p] + col_offset,
                     scale * line.values[p]});
  }
}

void write_matrix_market(std::ostream &os, SparseMatrix const &m)
{
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  os << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    auto const line = m.row(i);
    for (std::size_t p = 0; p < line.size(); ++p)
      os << i + 1 << ' ' << line.indices[p] + 1 << ' ' << line.values[p]
         << '\n';
  }
}

} // namespace aaomg
