#include "aaomg/smoothers.hpp"

#include "aaomg/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aaomg {

char const *to_string(SmootherType t)
{
  switch (t) {
  case SmootherType::NormalEquation:
    return "normal";
  case SmootherType::Lsgs:
    return "lsgs";
  case SmootherType::SymmetricLsgs:
    return "slsgs";
  case SmootherType::CollectiveGs:
    return "cgs";
  case SmootherType::Vanka:
    return "vanka";
  }
  return "?";
}

std::optional<SmootherType> parse_smoother(std::string_view name)
{
  for (auto t : {SmootherType::NormalEquation, SmootherType::Lsgs,
                 SmootherType::SymmetricLsgs, SmootherType::CollectiveGs,
                 SmootherType::Vanka})
    if (name == to_string(t))
      return t;
  return std::nullopt;
}

SmootherKind SmootherKind::defaults(SmootherType type, Problem problem)
{
  switch (type) {
  case SmootherType::NormalEquation:
    return {type, problem == Problem::PoissonControl ? 0.4 : 0.35};
  case SmootherType::Vanka:
    return {type, 0.4};
  default:
    return {type, 1.0};
  }
}

bool applicable(SmootherType type, Problem problem)
{
  if (type == SmootherType::CollectiveGs)
    return problem == Problem::PoissonControl;
  if (type == SmootherType::Vanka)
    return problem == Problem::StokesControl;
  return true;
}

Smoother::Smoother(BlockSystem const &system, ColumnView const &columns)
    : system_(system), columns_(columns)
{
  if (columns.rows() != system.matrix.rows() ||
      columns.cols() != system.matrix.cols())
    throw DimensionMismatch("column view does not belong to the system");
}

void Smoother::check_sizes(std::span<double> x, std::span<double> r) const
{
  auto const n = static_cast<std::size_t>(system_.size());
  if (x.size() != n || r.size() != n)
    throw DimensionMismatch("smoother: iterate or residual has wrong length");
}

void Smoother::update_residual(Index column, double step, std::span<double> r)
{
  auto const col = columns_.column(column);
  for (std::size_t p = 0; p < col.size(); ++p)
    r[col.indices[p]] -= col.values[p] * step;
  matrix_ops_ += col.size();
}

namespace {

std::vector<double> scale_by_norm(SparseMatrix const &a,
                                  std::span<const double> norm_diag)
{
  std::vector<double> scaled(a.values().begin(), a.values().end());
  auto const cols = a.col_indices();
  for (std::size_t p = 0; p < scaled.size(); ++p)
    scaled[p] /= norm_diag[cols[p]];
  return scaled;
}

// q = sum_j A_ij / L_jj * r_j over row i.
double weighted_row_dot(SparseMatrix const &a, std::span<const double> scaled,
                        Index i, std::span<const double> r)
{
  auto const offsets = a.row_offsets();
  auto const cols = a.col_indices();
  double q = 0.0;
  for (Index p = offsets[i]; p < offsets[i + 1]; ++p)
    q += scaled[p] * r[cols[p]];
  return q;
}

} // namespace

NormalEquationSmoother::NormalEquationSmoother(BlockSystem const &system,
                                               ColumnView const &columns,
                                               double damping)
    : Smoother(system, columns), damping_(damping),
      scaled_(scale_by_norm(system.matrix, system.norm_diag)),
      update_(static_cast<std::size_t>(system.size()))
{
  if (!(damping > 0.0 && damping < 2.0))
    throw InvalidArgument("damping must lie in (0, 2)");
}

void NormalEquationSmoother::sweep(std::span<double> x, std::span<double> r)
{
  check_sizes(x, r);
  auto const &a = system_.matrix;
  auto const n = a.rows();
  for (Index i = 0; i < n; ++i)
    update_[i] =
        damping_ * weighted_row_dot(a, scaled_, i, r) / system_.norm_diag[i];
  matrix_ops_ += a.nnz();
  for (Index i = 0; i < n; ++i) {
    x[i] += update_[i];
    update_residual(i, update_[i], r);
  }
}

LsgsSmoother::LsgsSmoother(BlockSystem const &system, ColumnView const &columns,
                           SweepOrder order)
    : Smoother(system, columns), order_(order),
      scaled_(scale_by_norm(system.matrix, system.norm_diag)),
      normal_diag_(static_cast<std::size_t>(system.size()), 0.0)
{
  auto const &a = system.matrix;
  for (Index i = 0; i < a.rows(); ++i) {
    auto const line = a.row(i);
    double sum = 0.0;
    for (std::size_t p = 0; p < line.size(); ++p)
      sum += line.values[p] * line.values[p] /
             system.norm_diag[line.indices[p]];
    if (!(sum > 0.0))
      throw SingularMatrix("zero row " + std::to_string(i) +
                           " in the system matrix");
    normal_diag_[i] = sum;
  }
}

void LsgsSmoother::relax(Index i, std::span<double> x, std::span<double> r)
{
  double const q = weighted_row_dot(system_.matrix, scaled_, i, r);
  matrix_ops_ += system_.matrix.row(i).size();
  double const p = q / normal_diag_[i];
  x[i] += p;
  update_residual(i, p, r);
}

void LsgsSmoother::sweep(std::span<double> x, std::span<double> r)
{
  sweep(x, r, order_);
}

void LsgsSmoother::sweep(std::span<double> x, std::span<double> r,
                         SweepOrder order)
{
  check_sizes(x, r);
  auto const n = system_.size();
  if (order == SweepOrder::Forward)
    for (Index i = 0; i < n; ++i)
      relax(i, x, r);
  else
    for (Index i = n; i-- > 0;)
      relax(i, x, r);
}

SymmetricLsgsSmoother::SymmetricLsgsSmoother(BlockSystem const &system,
                                             ColumnView const &columns)
    : LsgsSmoother(system, columns)
{
}

void SymmetricLsgsSmoother::sweep(std::span<double> x, std::span<double> r)
{
  LsgsSmoother::sweep(x, r, SweepOrder::Forward);
  LsgsSmoother::sweep(x, r, SweepOrder::Backward);
}

CollectiveGsSmoother::CollectiveGsSmoother(BlockSystem const &system,
                                           ColumnView const &columns)
    : Smoother(system, columns)
{
  if (system.problem != Problem::PoissonControl)
    throw InvalidArgument("collective Gauss-Seidel needs the Poisson control "
                          "problem");
  nodes_ = system.layout.field("y").size;
  auto const &a = system.matrix;
  inverses_.resize(static_cast<std::size_t>(nodes_));
  for (Index i = 0; i < nodes_; ++i) {
    double const a11 = a.at(i, i);
    double const a12 = a.at(i, i + nodes_);
    double const a21 = a.at(i + nodes_, i);
    double const a22 = a.at(i + nodes_, i + nodes_);
    double const det = a11 * a22 - a12 * a21;
    if (det == 0.0)
      throw SingularMatrix("singular 2x2 block at node " + std::to_string(i));
    inverses_[i] = {a22 / det, -a12 / det, -a21 / det, a11 / det};
  }
}

void CollectiveGsSmoother::sweep(std::span<double> x, std::span<double> r)
{
  check_sizes(x, r);
  for (Index i = 0; i < nodes_; ++i) {
    auto const j = i + nodes_;
    auto const &inv = inverses_[i];
    double const sy = inv[0] * r[i] + inv[1] * r[j];
    double const sl = inv[2] * r[i] + inv[3] * r[j];
    x[i] += sy;
    x[j] += sl;
    update_residual(i, sy, r);
    update_residual(j, sl, r);
  }
}

std::vector<VankaPatch> build_vanka_patches(BlockSystem const &system,
                                            MeshLevel const &mesh)
{
  if (system.problem != Problem::StokesControl)
    throw InvalidArgument("Vanka patches need the Stokes control problem");
  auto const dofs = p2_dofs(mesh);
  auto const nv = dofs.free_count();
  if (system.layout.field("v").size != 2 * nv ||
      system.layout.field("p").size != mesh.vertex_count())
    throw DimensionMismatch("mesh does not match the Stokes system");
  auto const ov = system.layout.field("v").offset;
  auto const op = system.layout.field("p").offset;
  auto const ol = system.layout.field("lambda").offset;
  auto const om = system.layout.field("mu").offset;
  auto const nvert = mesh.vertex_count();
  auto const incident = mesh.vertex_edges();

  std::vector<std::vector<Index>> vertex_triangles(
      static_cast<std::size_t>(nvert));
  for (Index t = 0; t < mesh.triangle_count(); ++t)
    for (auto v : mesh.triangles()[t])
      vertex_triangles[v].push_back(t);

  std::vector<VankaPatch> patches;
  for (Index v = 0; v < nvert; ++v) {
    std::vector<Index> nodes; // free P2 indices
    auto add_node = [&](Index p2dof) {
      auto const f = dofs.free_index[p2dof];
      if (f >= 0 && std::find(nodes.begin(), nodes.end(), f) == nodes.end())
        nodes.push_back(f);
    };
    add_node(v);
    for (auto e : incident[v])
      add_node(nvert + e);
    if (nodes.empty())
      for (auto t : vertex_triangles[v])
        for (auto e : mesh.triangle_edges()[t])
          add_node(nvert + e);
    if (nodes.empty())
      continue;

    VankaPatch patch{v, {}};
    for (auto f : nodes)
      for (int c = 0; c < 2; ++c) {
        patch.dofs.push_back(ov + c * nv + f);
        patch.dofs.push_back(ol + c * nv + f);
      }
    patch.dofs.push_back(op + v);
    patch.dofs.push_back(om + v);
    std::sort(patch.dofs.begin(), patch.dofs.end());
    patches.push_back(std::move(patch));
  }
  return patches;
}

DenseMatrix patch_matrix(SparseMatrix const &a, std::span<const Index> dofs)
{
  DenseMatrix local(dofs.size(), dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    auto const line = a.row(dofs[i]);
    // Both index lists are sorted, so merge.
    std::size_t p = 0;
    for (std::size_t j = 0; j < dofs.size() && p < line.size(); ++j) {
      while (p < line.size() && line.indices[p] < dofs[j])
        ++p;
      if (p < line.size() && line.indices[p] == dofs[j])
        local(i, j) = line.values[p];
    }
  }
  return local;
}

VankaSmoother::VankaSmoother(BlockSystem const &system,
                             ColumnView const &columns, MeshLevel const &mesh,
                             double damping)
    : VankaSmoother(system, columns, build_vanka_patches(system, mesh), damping)
{
}

VankaSmoother::VankaSmoother(BlockSystem const &system,
                             ColumnView const &columns,
                             std::vector<VankaPatch> patches, double damping)
    : Smoother(system, columns), damping_(damping), patches_(std::move(patches))
{
  if (!(damping > 0.0 && damping < 2.0))
    throw InvalidArgument("damping must lie in (0, 2)");
  factors_.reserve(patches_.size());
  std::size_t largest = 0;
  for (std::size_t k = 0; k < patches_.size(); ++k) {
    auto const &dofs = patches_[k].dofs;
    for (auto d : dofs)
      if (d < 0 || d >= system.size())
        throw DimensionMismatch("patch dof outside the system");
    // Equilibrate with L: the raw patch mixes M and M/alpha and partial
    // pivoting alone loses everything once alpha is tiny.
    std::vector<double> scale(dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i)
      scale[i] = 1.0 / std::sqrt(system.norm_diag[static_cast<std::size_t>(dofs[i])]);
    auto local = patch_matrix(system.matrix, dofs);
    for (std::size_t i = 0; i < dofs.size(); ++i)
      for (std::size_t j = 0; j < dofs.size(); ++j)
        local(i, j) *= scale[i] * scale[j];
    scales_.push_back(std::move(scale));
    try {
      factors_.emplace_back(std::move(local));
    } catch (SingularMatrix const &e) {
      throw SingularMatrix("singular Vanka patch " + std::to_string(k) +
                           " (vertex " + std::to_string(patches_[k].vertex) +
                           "): " + e.what());
    }
    largest = std::max(largest, dofs.size());
  }
  local_.resize(largest);
}

void VankaSmoother::sweep(std::span<double> x, std::span<double> r)
{
  check_sizes(x, r);
  for (std::size_t k = 0; k < patches_.size(); ++k) {
    auto const &dofs = patches_[k].dofs;
    std::span<double> local(local_.data(), dofs.size());
    auto const &scale = scales_[k];
    for (std::size_t i = 0; i < dofs.size(); ++i)
      local[i] = scale[i] * r[dofs[i]];
    factors_[k].solve_in_place(local);
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      double const step = damping_ * scale[i] * local[i];
      x[dofs[i]] += step;
      update_residual(dofs[i], step, r);
    }
  }
}

std::unique_ptr<Smoother> make_smoother(SmootherKind kind,
                                        BlockSystem const &system,
                                        ColumnView const &columns,
                                        MeshLevel const &mesh)
{
  if (!applicable(kind.type, system.problem))
    throw InvalidArgument(std::string("smoother '") + to_string(kind.type) +
                          "' is not available for the " +
                          to_string(system.problem) + " control problem");
  switch (kind.type) {
  case SmootherType::NormalEquation:
    return std::make_unique<NormalEquationSmoother>(system, columns,
                                                    kind.damping);
  case SmootherType::Lsgs:
    return std::make_unique<LsgsSmoother>(system, columns);
  case SmootherType::SymmetricLsgs:
    return std::make_unique<SymmetricLsgsSmoother>(system, columns);
  case SmootherType::CollectiveGs:
    return std::make_unique<CollectiveGsSmoother>(system, columns);
  case SmootherType::Vanka:
    return std::make_unique<VankaSmoother>(system, columns, mesh, kind.damping);
  }
  throw InvalidArgument("unknown smoother");
}

} // namespace aaomg
