#include "aaomg/analysis.hpp"

#include "aaomg/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

namespace aaomg {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

Mat to_eigen(SparseMatrix const &m)
{
  Mat out = Mat::Zero(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    auto line = m.row(i);
    for (std::size_t k = 0; k < line.indices.size(); ++k)
      out(i, line.indices[k]) = line.values[k];
  }
  return out;
}

Mat to_eigen(DenseMatrix const &m)
{
  Mat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) = m(i, j);
  return out;
}

DenseMatrix from_eigen(Mat const &m)
{
  DenseMatrix out(static_cast<std::size_t>(m.rows()),
                  static_cast<std::size_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
  return out;
}

Vec to_eigen(Vector const &v)
{
  return Eigen::Map<const Vec>(v.data(), static_cast<Index>(v.size()));
}

void require_size(BlockSystem const &system, Index cap, char const *what)
{
  if (system.size() > cap)
    throw InvalidArgument(std::string(what) + ": dense path limited to " +
                          std::to_string(cap) + " unknowns, got " +
                          std::to_string(system.size()));
}

double spectral_norm(Mat const &m)
{
  if (m.size() == 0)
    return 0.0;
  Eigen::BDCSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

// Orthonormal basis of the complement of the Euclidean constants in the
// kernel fields, identity elsewhere. Both A and Q map this subspace to itself.
Mat range_basis(BlockSystem const &system)
{
  auto const n = system.size();
  auto const kernel = system.nullspace_fields();
  Mat z = Mat::Zero(n, n - static_cast<Index>(kernel.size()));
  Index col = 0;
  for (auto const &f : system.layout.fields) {
    bool const reduce =
        std::find(kernel.begin(), kernel.end(), f.name) != kernel.end();
    if (!reduce) {
      for (Index i = 0; i < f.size; ++i)
        z(f.offset + i, col++) = 1.0;
      continue;
    }
    // Householder reflector mapping e_1 to the normalized constant; its
    // remaining columns span the complement.
    Vec u = Vec::Constant(f.size, 1.0 / std::sqrt(double(f.size)));
    u(0) -= 1.0;
    double const un = u.squaredNorm();
    Mat h = Mat::Identity(f.size, f.size);
    if (un > 0.0)
      h -= (2.0 / un) * u * u.transpose();
    z.block(f.offset, col, f.size, f.size - 1) =
        h.rightCols(f.size - 1);
    col += f.size - 1;
  }
  return z;
}

Mat inverse_sqrt(Mat const &spd, char const *what)
{
  Eigen::SelfAdjointEigenSolver<Mat> eig(spd);
  if (eig.info() != Eigen::Success)
    throw Error(std::string(what) + ": eigen decomposition failed");
  Vec const &d = eig.eigenvalues();
  if (d.size() > 0 && !(d(0) > 1e-14 * std::abs(d(d.size() - 1))))
    throw SingularMatrix(std::string(what) + " is not positive definite");
  return eig.eigenvectors() * d.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

Mat normal_matrix(BlockSystem const &system, Mat const &a)
{
  Vec const linv = to_eigen(system.norm_diag).cwiseInverse();
  return a.transpose() * linv.asDiagonal() * a;
}

} // namespace

DenseMatrix norm_matrix(BlockSystem const &system)
{
  double const alpha = system.alpha;
  double const sa = std::sqrt(alpha);
  Mat const m = to_eigen(system.mass);
  Mat const k = to_eigen(system.stiffness);
  Mat q = Mat::Zero(system.size(), system.size());
  if (system.problem == Problem::PoissonControl) {
    auto const &y = system.layout.field("y");
    auto const &l = system.layout.field("lambda");
    q.block(y.offset, y.offset, y.size, y.size) = m + sa * k;
    q.block(l.offset, l.offset, l.size, l.size) = m / alpha + k / sa;
    return from_eigen(q);
  }

  Mat const w = m + sa * k;
  Index const nv = w.rows();
  Mat wvec = Mat::Zero(2 * nv, 2 * nv);
  wvec.topLeftCorner(nv, nv) = w;
  wvec.bottomRightCorner(nv, nv) = w;
  Mat const d = to_eigen(system.divergence);
  Eigen::LLT<Mat> llt(w);
  if (llt.info() != Eigen::Success)
    throw SingularMatrix("W is not positive definite");
  Mat winv_dt(2 * nv, d.rows());
  winv_dt.topRows(nv) = llt.solve(d.leftCols(nv).transpose());
  winv_dt.bottomRows(nv) = llt.solve(d.rightCols(nv).transpose());
  Mat const s = d * winv_dt;

  auto place = [&](char const *name, Mat const &block) {
    auto const &f = system.layout.field(name);
    q.block(f.offset, f.offset, f.size, f.size) = block;
  };
  place("v", wvec);
  place("p", alpha * s);
  place("lambda", wvec / alpha);
  place("mu", s);
  return from_eigen(q);
}

StabilityConstants stability_constants(BlockSystem const &system)
{
  require_size(system, stability_max_dimension, "stability_constants");
  Mat const z = range_basis(system);
  Mat const a = z.transpose() * to_eigen(system.matrix) * z;
  Mat const q = z.transpose() * to_eigen(norm_matrix(system)) * z;
  // Q is block diagonal by field and the blocks differ in scale by up to
  // 1/alpha, so each block gets its own decomposition.
  Mat qis = Mat::Zero(q.rows(), q.cols());
  auto const kernel = system.nullspace_fields();
  Index col = 0;
  for (auto const &f : system.layout.fields) {
    bool const reduced =
        std::find(kernel.begin(), kernel.end(), f.name) != kernel.end();
    Index const m = reduced ? f.size - 1 : f.size;
    qis.block(col, col, m, m) = inverse_sqrt(q.block(col, col, m, m), "Q");
    col += m;
  }
  Mat const s = qis * a * qis;
  Eigen::SelfAdjointEigenSolver<Mat> eig(s, Eigen::EigenvaluesOnly);
  Vec const mag = eig.eigenvalues().cwiseAbs();
  return {mag.minCoeff(), mag.maxCoeff()};
}

double inverse_inequality_constant(BlockSystem const &system)
{
  require_size(system, stability_max_dimension, "inverse_inequality_constant");
  Vec const lis = to_eigen(system.norm_diag).cwiseSqrt().cwiseInverse();
  Mat const s =
      lis.asDiagonal() * to_eigen(norm_matrix(system)) * lis.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat> eig(s, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

double scaled_operator_norm(BlockSystem const &system)
{
  require_size(system, stability_max_dimension, "scaled_operator_norm");
  Vec const lis = to_eigen(system.norm_diag).cwiseSqrt().cwiseInverse();
  return spectral_norm(lis.asDiagonal() * to_eigen(system.matrix) *
                       lis.asDiagonal());
}

DenseMatrix sweep_operator(Smoother &smoother)
{
  auto const size = smoother.system().size();
  DenseMatrix s(static_cast<std::size_t>(size), static_cast<std::size_t>(size));
  Vector x(static_cast<std::size_t>(size));
  Vector r(static_cast<std::size_t>(size));
  auto const &a = smoother.system().matrix;
  for (Index j = 0; j < size; ++j) {
    std::fill(x.begin(), x.end(), 0.0);
    x[static_cast<std::size_t>(j)] = 1.0;
    a.matvec(x, r);
    for (auto &e : r)
      e = -e;
    smoother.sweep(x, r);
    for (Index i = 0; i < size; ++i)
      s(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          x[static_cast<std::size_t>(i)];
  }
  return s;
}

DenseMatrix compact_operator(SmootherKind kind, BlockSystem const &system)
{
  require_size(system, smoothing_max_dimension, "compact_operator");
  Mat const a = to_eigen(system.matrix);
  Mat const n = normal_matrix(system, a);
  Index const size = system.size();
  Mat const id = Mat::Identity(size, size);
  switch (kind.type) {
  case SmootherType::NormalEquation: {
    Vec const linv = to_eigen(system.norm_diag).cwiseInverse();
    return from_eigen(id - kind.damping * linv.asDiagonal() * n);
  }
  case SmootherType::Lsgs:
    return from_eigen(id - n.triangularView<Eigen::Lower>().solve(n));
  case SmootherType::SymmetricLsgs: {
    // Nhat^-1 = trig(N)^-T diag(N) trig(N)^-1
    Mat t = n.triangularView<Eigen::Lower>().solve(n);
    t = n.diagonal().asDiagonal() * t;
    t = n.transpose().triangularView<Eigen::Upper>().solve(t);
    return from_eigen(id - t);
  }
  default:
    throw InvalidArgument(std::string("no closed form for smoother '") +
                          to_string(kind.type) + "'");
  }
}

double smoothing_bound(double c_bar, Index nnz, int nu)
{
  return c_bar * std::pow(double(nnz), 2.5) /
         (std::sqrt(2.0) * std::sqrt(double(nu)));
}

SmoothingCurve smoothing_norm(BlockSystem const &system, MeshLevel const &mesh,
                              SmootherKind kind, int nu_max)
{
  require_size(system, smoothing_max_dimension, "smoothing_norm");
  if (nu_max < 1)
    throw InvalidArgument("nu_max must be positive");

  Mat s;
  if (kind.type == SmootherType::CollectiveGs ||
      kind.type == SmootherType::Vanka) {
    ColumnView columns(system.matrix);
    auto smoother = make_smoother(kind, system, columns, mesh);
    s = to_eigen(sweep_operator(*smoother));
  } else {
    s = to_eigen(compact_operator(kind, system));
  }

  Vec const lis = to_eigen(system.norm_diag).cwiseSqrt().cwiseInverse();
  Mat const left = lis.asDiagonal() * to_eigen(system.matrix);

  SmoothingCurve curve;
  curve.kind = kind;
  curve.nnz = system.matrix.max_row_nnz();
  Mat x = Mat(lis.asDiagonal());
  curve.c_bar = spectral_norm(left * x);
  for (int nu = 1; nu <= nu_max; ++nu) {
    x = s * x;
    curve.nu.push_back(nu);
    curve.eta_measured.push_back(spectral_norm(left * x));
    curve.eta_bound.push_back(smoothing_bound(curve.c_bar, curve.nnz, nu));
  }
  return curve;
}

Lemma1Report lemma1_check(BlockSystem const &system, MeshLevel const &mesh,
                          int nu_max)
{
  auto const curve =
      smoothing_norm(system, mesh, {SmootherType::SymmetricLsgs, 1.0}, nu_max);
  Lemma1Report report;
  report.c_bar = curve.c_bar;
  report.nnz = curve.nnz;
  report.inverse_inequality_delta = inverse_inequality_constant(system) - 1.0;
  report.eta = curve.eta_measured;
  report.bound = curve.eta_bound;
  report.passed = true;
  for (std::size_t i = 0; i < curve.nu.size(); ++i) {
    double const eta = curve.eta_measured[i];
    double const bound = curve.eta_bound[i];
    report.margin.push_back(eta > 0.0 ? bound / eta : INFINITY);
    if (!(eta <= bound) && report.passed) {
      report.passed = false;
      report.first_violation = curve.nu[i];
    }
  }
  return report;
}

double normal_equation_radius(BlockSystem const &system, double tau,
                              int max_steps)
{
  if (max_steps < 1)
    throw InvalidArgument("normal_equation_radius: max_steps must be >= 1");
  auto const n = system.size();
  auto const m = std::min<Index>(n, max_steps);
  Eigen::VectorXd const lis = to_eigen(system.norm_diag).cwiseSqrt().cwiseInverse();
  auto const at = system.matrix.transpose();

  // Lanczos with full reorthogonalization on the symmetric form
  // B = L^-1/2 A^T L^-1 A L^-1/2, which has the same spectrum as L^-1 A^T L^-1 A.
  Vector in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  auto apply = [&](Eigen::VectorXd const &v) {
    Eigen::Map<Eigen::VectorXd>(in.data(), n) = lis.cwiseProduct(v);
    system.matrix.matvec(in, out);
    Eigen::Map<Eigen::VectorXd> o(out.data(), n);
    o.array() /= to_eigen(system.norm_diag).array();
    at.matvec(out, in);
    return Eigen::VectorXd(lis.cwiseProduct(Eigen::Map<Eigen::VectorXd>(in.data(), n)));
  };

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd basis(n, m);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i)
    v(i) = dist(gen);
  basis.col(0) = v.normalized();
  std::vector<double> diag, off;
  double theta = 0.0;
  for (Index j = 0; j < m; ++j) {
    Eigen::VectorXd w = apply(basis.col(j));
    diag.push_back(basis.col(j).dot(w));
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    double const beta = w.norm();

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(j + 1, j + 1);
    for (Index i = 0; i <= j; ++i) {
      t(i, i) = diag[static_cast<std::size_t>(i)];
      if (i > 0)
        t(i, i - 1) = t(i - 1, i) = off[static_cast<std::size_t>(i - 1)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    theta = es.eigenvalues()(j);
    // residual norm of the top Ritz pair
    double const resid = beta * std::abs(es.eigenvectors()(j, j));
    if (resid <= 1e-10 * theta || beta <= 1e-14 * theta || j + 1 == m)
      break;
    off.push_back(beta);
    basis.col(j + 1) = w / beta;
  }
  return tau * theta;
}

void write_smoothing_csv(std::ostream &os, BlockSystem const &system,
                         SmoothingCurve const &curve, bool header)
{
  if (header)
    os << "problem,level,alpha,smoother,nu,eta_measured,eta_bound\n";
  auto const flags = os.flags();
  auto const prec = os.precision(10);
  for (std::size_t i = 0; i < curve.nu.size(); ++i)
    os << to_string(system.problem) << ',' << system.level << ','
       << system.alpha << ',' << to_string(curve.kind.type) << ','
       << curve.nu[i] << ',' << curve.eta_measured[i] << ','
       << curve.eta_bound[i] << '\n';
  os.precision(prec);
  os.flags(flags);
}

} // namespace aaomg
