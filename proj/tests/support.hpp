// Helpers shared by the unit tests: dense oracles and random data.
#ifndef AAOMG_TEST_SUPPORT_HPP
#define AAOMG_TEST_SUPPORT_HPP

#include "aaomg/dense.hpp"
#include "aaomg/sparse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

namespace testing {

using aaomg::Index;
using aaomg::SparseMatrix;
using aaomg::Vector;

inline Eigen::MatrixXd dense(SparseMatrix const &m)
{
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    auto line = m.row(i);
    for (std::size_t k = 0; k < line.size(); ++k)
      d(i, line.indices[k]) += line.values[k];
  }
  return d;
}

inline Eigen::MatrixXd dense(aaomg::DenseMatrix const &m)
{
  Eigen::MatrixXd d(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      d(i, j) = m(i, j);
  return d;
}

inline Eigen::VectorXd eig(std::span<const double> v)
{
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Index>(v.size()));
}

inline Vector std_vec(Eigen::VectorXd const &v)
{
  return Vector(v.data(), v.data() + v.size());
}

inline double max_abs(Eigen::MatrixXd const &m)
{
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

inline double rel_diff(Eigen::MatrixXd const &a, Eigen::MatrixXd const &b)
{
  double const scale = std::max(max_abs(a), max_abs(b));
  return scale > 0.0 ? max_abs(a - b) / scale : 0.0;
}

inline SparseMatrix random_sparse(Index rows, Index cols, double density,
                                  std::uint64_t seed)
{
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<aaomg::Triplet> t;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (coin(gen) < density)
        t.push_back({i, j, val(gen)});
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

inline Vector random_vector(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  Vector v(n);
  for (auto &e : v)
    e = val(gen);
  return v;
}

} // namespace testing

#endif
