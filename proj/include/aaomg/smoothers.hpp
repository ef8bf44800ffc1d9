#ifndef AAOMG_SMOOTHERS_HPP
#define AAOMG_SMOOTHERS_HPP

#include "aaomg/assembly.hpp"
#include "aaomg/dense.hpp"
#include "aaomg/mesh.hpp"
#include "aaomg/sparse.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace aaomg {

enum class SmootherType { NormalEquation, Lsgs, SymmetricLsgs, CollectiveGs, Vanka };

char const *to_string(SmootherType t);
std::optional<SmootherType> parse_smoother(std::string_view name);

/// Smoother choice plus damping factor tau (ignored by the Gauss-Seidel
/// variants, which are never damped).
struct SmootherKind
{
  SmootherType type = SmootherType::Lsgs;
  double damping = 1.0;

  /// Damping used in the reference experiments: 0.4 (Poisson) and 0.35
  /// (Stokes) for the normal equation smoother, 0.4 for Vanka.
  static SmootherKind defaults(SmootherType type, Problem problem);
};

/// Whether the smoother is defined for the given model problem. CGS needs
/// co-located state/multiplier pairs (Poisson), Vanka the Taylor-Hood patches
/// (Stokes).
bool applicable(SmootherType type, Problem problem);

enum class SweepOrder { Forward, Backward };

/// One smoothing step x <- x + B (f - A x) applied in place. Every sweep
/// expects r = f - A x on entry and leaves r consistent with the new x.
class Smoother
{
public:
  Smoother(BlockSystem const &system, ColumnView const &columns);
  virtual ~Smoother() = default;

  Smoother(Smoother const &) = delete;
  Smoother &operator=(Smoother const &) = delete;

  virtual void sweep(std::span<double> x, std::span<double> r) = 0;

  BlockSystem const &system() const { return system_; }

  /// Multiply-adds that touched an entry of A since construction.
  std::uint64_t matrix_operations() const { return matrix_ops_; }

protected:
  void check_sizes(std::span<double> x, std::span<double> r) const;
  void update_residual(Index column, double step, std::span<double> r);

  BlockSystem const &system_;
  ColumnView const &columns_;
  std::uint64_t matrix_ops_ = 0;
};

/// Damped Richardson iteration on the normal equation,
/// x <- x + tau L^-1 A^T L^-1 r, as a two-phase sweep.
class NormalEquationSmoother final : public Smoother
{
public:
  NormalEquationSmoother(BlockSystem const &system, ColumnView const &columns,
                         double damping);
  void sweep(std::span<double> x, std::span<double> r) override;

private:
  double damping_;
  std::vector<double> scaled_; // A_ij / L_jj in row layout
  std::vector<double> update_;
};

/// Gauss-Seidel on N = A^T L^-1 A without forming N: each unknown is updated
/// from the current residual, which is then corrected through column i of A.
class LsgsSmoother : public Smoother
{
public:
  LsgsSmoother(BlockSystem const &system, ColumnView const &columns,
               SweepOrder order = SweepOrder::Forward);
  void sweep(std::span<double> x, std::span<double> r) override;

  void sweep(std::span<double> x, std::span<double> r, SweepOrder order);
  std::span<const double> normal_diagonal() const { return normal_diag_; }

private:
  void relax(Index i, std::span<double> x, std::span<double> r);

  SweepOrder order_;
  std::vector<double> scaled_;
  std::vector<double> normal_diag_; // N_ii = sum_j A_ij^2 / L_jj
};

/// Forward LSGS sweep followed by a backward one.
class SymmetricLsgsSmoother final : public LsgsSmoother
{
public:
  SymmetricLsgsSmoother(BlockSystem const &system, ColumnView const &columns);
  void sweep(std::span<double> x, std::span<double> r) override;
};

/// Collective Gauss-Seidel for Poisson control: node i updates (y_i, lambda_i)
/// together by solving the 2x2 system [[M_ii, K_ii], [K_ii, -M_ii/alpha]].
class CollectiveGsSmoother final : public Smoother
{
public:
  CollectiveGsSmoother(BlockSystem const &system, ColumnView const &columns);
  void sweep(std::span<double> x, std::span<double> r) override;

private:
  Index nodes_;
  std::vector<std::array<double, 4>> inverses_; // row-major 2x2 inverse
};

struct VankaPatch
{
  Index vertex;
  std::vector<Index> dofs; // increasing global indices
};

/// Vertex patches for the Taylor-Hood discretization: velocity and multiplier
/// dofs (both components) at the vertex and at midpoints of incident edges,
/// plus the pressure and pressure-multiplier dofs of the vertex. Dirichlet dofs
/// are excluded. A vertex without free velocity dofs on its incident edges
/// (a domain corner not touched by a diagonal) borrows the free velocity dofs
/// of the triangles around it, so its pressure dofs are still smoothed.
std::vector<VankaPatch> build_vanka_patches(BlockSystem const &system,
                                            MeshLevel const &mesh);

/// Dense P^T A P for a patch.
DenseMatrix patch_matrix(SparseMatrix const &a, std::span<const Index> dofs);

/// Multiplicative Vanka: x <- x + tau P (P^T A P)^-1 P^T r patch by patch.
class VankaSmoother final : public Smoother
{
public:
  VankaSmoother(BlockSystem const &system, ColumnView const &columns,
                MeshLevel const &mesh, double damping);
  VankaSmoother(BlockSystem const &system, ColumnView const &columns,
                std::vector<VankaPatch> patches, double damping);
  void sweep(std::span<double> x, std::span<double> r) override;

  std::vector<VankaPatch> const &patches() const { return patches_; }

private:
  double damping_;
  std::vector<VankaPatch> patches_;
  std::vector<LuFactorization> factors_;
  std::vector<std::vector<double>> scales_; // L^-1/2 on each patch
  std::vector<double> local_;
};

/// Throws InvalidArgument when the smoother does not apply to the problem.
std::unique_ptr<Smoother> make_smoother(SmootherKind kind,
                                        BlockSystem const &system,
                                        ColumnView const &columns,
                                        MeshLevel const &mesh);

} // namespace aaomg

#endif
