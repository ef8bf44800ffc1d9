#ifndef AAOMG_MULTIGRID_HPP
#define AAOMG_MULTIGRID_HPP

#include "aaomg/assembly.hpp"
#include "aaomg/dense.hpp"
#include "aaomg/mesh.hpp"
#include "aaomg/smoothers.hpp"
#include "aaomg/sparse.hpp"
#include "aaomg/transfer.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace aaomg {

enum class CycleType { V, W };

struct CycleConfig
{
  CycleType cycle = CycleType::W;
  int nu_pre = 2;
  int nu_post = 2;
  SmootherKind smoother;
  int coarsest_level = 1;
  int max_iterations = 200;
  double tolerance = 1e-6;
  std::uint64_t seed = 20140101;

  /// Reference settings: W-cycle, 2+2 sweeps (1+1 for sLSGS) and the
  /// smoother's default damping.
  static CycleConfig defaults(SmootherType type, Problem problem);
};

struct SolveReport
{
  int iterations = 0;
  /// L-norm of the iterate before the first and after every cycle.
  std::vector<double> norm_history;
  bool converged = false;
  bool diverged = false;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

/// Meshes, systems, column views and transfers for levels k_min..k_max of one
/// problem and one alpha. Immutable after construction.
class Hierarchy
{
public:
  Hierarchy(Problem problem, int k_min, int k_max, double alpha);

  Problem problem() const { return problem_; }
  double alpha() const { return alpha_; }
  int k_min() const { return meshes_.k_min(); }
  int k_max() const { return meshes_.k_max(); }

  MeshLevel const &mesh(int k) const { return meshes_.level(k); }
  BlockSystem const &system(int k) const { return levels_[index(k)].system; }
  ColumnView const &columns(int k) const { return levels_[index(k)].columns; }
  /// Transfer between level k - 1 and level k.
  TransferPair const &transfer(int k) const;

private:
  struct Level
  {
    BlockSystem system;
    ColumnView columns;
  };

  std::size_t index(int k) const;

  Problem problem_;
  double alpha_;
  MeshHierarchy meshes_;
  std::vector<Level> levels_;
  std::vector<TransferPair> transfers_;
};

/// Shift the kernel fields (Stokes p and mu) to zero integral mean.
void project_nullspace(BlockSystem const &system, std::span<double> x);

/// Integral mean of a pressure-type field (Stokes only).
double field_mean(BlockSystem const &system, std::string const &field,
                  std::span<const double> x);

/// Exact solver for the coarsest level. For Stokes the constant pressure and
/// pressure-multiplier modes are handled by pinning one dof of each, projecting
/// the right-hand side onto the range and re-centering the solution.
class CoarseSolver
{
public:
  /// Systems larger than this must use a finer coarsest level.
  static constexpr Index max_dimension = 5000;

  explicit CoarseSolver(BlockSystem const &system);
  void solve(std::span<const double> f, std::span<double> x) const;

private:
  BlockSystem const &system_;
  std::vector<Index> pinned_;
  LuFactorization lu_;
};

double l_norm(std::span<const double> x, std::span<const double> norm_diag);

/// Uniform values in [-1, 1] from a seeded mt19937_64; identical on every
/// platform.
Vector random_initial_guess(std::size_t n, std::uint64_t seed);

class MultigridSolver
{
public:
  MultigridSolver(Hierarchy const &hierarchy, int finest_level,
                  CycleConfig config);

  int finest_level() const { return finest_; }
  CycleConfig const &config() const { return config_; }

  /// One multigrid iteration on the finest level.
  void cycle(std::span<double> x, std::span<const double> f);

  /// Homogeneous problem from a seeded random start; the iterate is the error.
  SolveReport solve();
  /// Homogeneous problem from the given start, iterated in place.
  SolveReport solve_homogeneous(std::span<double> x);

  Smoother &smoother(int level) { return *smoothers_[index(level)]; }

private:
  std::size_t index(int k) const
  {
    return static_cast<std::size_t>(k - config_.coarsest_level);
  }
  void cycle(int level, std::span<double> x, std::span<const double> f);
  void residual(int level, std::span<const double> x,
                std::span<const double> f, std::span<double> r) const;

  Hierarchy const &hierarchy_;
  int finest_;
  CycleConfig config_;
  std::vector<std::unique_ptr<Smoother>> smoothers_;
  std::unique_ptr<CoarseSolver> coarse_;
  struct Scratch
  {
    Vector r, coarse_f, coarse_x, correction;
  };
  std::vector<Scratch> scratch_;
};

} // namespace aaomg

#endif
