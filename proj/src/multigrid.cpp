#include "aaomg/multigrid.hpp"

#include "aaomg/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

namespace aaomg {

CycleConfig CycleConfig::defaults(SmootherType type, Problem problem)
{
  CycleConfig c;
  c.smoother = SmootherKind::defaults(type, problem);
  if (type == SmootherType::SymmetricLsgs)
    c.nu_pre = c.nu_post = 1;
  return c;
}

Hierarchy::Hierarchy(Problem problem, int k_min, int k_max, double alpha)
    : problem_(problem), alpha_(alpha), meshes_(build_hierarchy(k_min, k_max))
{
  if (problem == Problem::StokesControl && k_min < 1)
    throw InvalidArgument("Stokes hierarchy needs k_min >= 1");
  levels_.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k) {
    auto system = build_system(problem, meshes_.level(k), alpha);
    ColumnView columns(system.matrix);
    levels_.push_back({std::move(system), std::move(columns)});
    if (k > k_min)
      transfers_.push_back(
          problem_transfer(problem, meshes_.level(k - 1), meshes_.level(k)));
  }
}

std::size_t Hierarchy::index(int k) const
{
  if (k < k_min() || k > k_max())
    throw InvalidArgument("level " + std::to_string(k) + " not in hierarchy");
  return static_cast<std::size_t>(k - k_min());
}

TransferPair const &Hierarchy::transfer(int k) const
{
  if (k <= k_min() || k > k_max())
    throw InvalidArgument("no transfer into level " + std::to_string(k));
  return transfers_[static_cast<std::size_t>(k - k_min() - 1)];
}

double field_mean(BlockSystem const &system, std::string const &field,
                  std::span<const double> x)
{
  auto const &f = system.layout.field(field);
  auto const &w = system.pressure_weights;
  if (w.size() != static_cast<std::size_t>(f.size))
    throw InvalidArgument("field '" + field + "' has no integral weights");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num += w[i] * x[static_cast<std::size_t>(f.offset) + i];
    den += w[i];
  }
  return num / den;
}

void project_nullspace(BlockSystem const &system, std::span<double> x)
{
  for (auto const &name : system.nullspace_fields()) {
    auto const &f = system.layout.field(name);
    double const mean = field_mean(system, name, x);
    for (Index i = 0; i < f.size; ++i)
      x[f.offset + i] -= mean;
  }
}

CoarseSolver::CoarseSolver(BlockSystem const &system) : system_(system)
{
  if (system.size() > max_dimension)
    throw InvalidArgument("coarse system has " + std::to_string(system.size()) +
                          " unknowns (max " + std::to_string(max_dimension) +
                          "); raise the coarsest level");
  auto dense = DenseMatrix::from_sparse(system.matrix);
  for (auto const &name : system.nullspace_fields())
    pinned_.push_back(system.layout.field(name).offset);
  for (auto p : pinned_) {
    for (std::size_t j = 0; j < dense.cols(); ++j) {
      dense(static_cast<std::size_t>(p), j) = 0.0;
      dense(j, static_cast<std::size_t>(p)) = 0.0;
    }
    dense(static_cast<std::size_t>(p), static_cast<std::size_t>(p)) = 1.0;
  }
  lu_ = LuFactorization(std::move(dense));
}

void CoarseSolver::solve(std::span<const double> f, std::span<double> x) const
{
  std::copy(f.begin(), f.end(), x.begin());
  // Remove the kernel component (constants in the Euclidean sense) from the
  // right-hand side so the pinned system is consistent.
  for (auto const &name : system_.nullspace_fields()) {
    auto const &fld = system_.layout.field(name);
    double sum = 0.0;
    for (Index i = 0; i < fld.size; ++i)
      sum += x[fld.offset + i];
    for (Index i = 0; i < fld.size; ++i)
      x[fld.offset + i] -= sum / fld.size;
  }
  for (auto p : pinned_)
    x[p] = 0.0;
  lu_.solve_in_place(x);
  project_nullspace(system_, x);
}

double l_norm(std::span<const double> x, std::span<const double> norm_diag)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    sum += norm_diag[i] * x[i] * x[i];
  return std::sqrt(sum);
}

Vector random_initial_guess(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 gen(seed);
  Vector x(n);
  for (auto &v : x) {
    // 53 random mantissa bits -> [0, 1), then affine map to [-1, 1).
    double const u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    v = 2.0 * u - 1.0;
  }
  return x;
}

MultigridSolver::MultigridSolver(Hierarchy const &hierarchy, int finest_level,
                                 CycleConfig config)
    : hierarchy_(hierarchy), finest_(finest_level), config_(config)
{
  if (config_.nu_pre < 0 || config_.nu_post < 0 ||
      config_.nu_pre + config_.nu_post < 1)
    throw InvalidArgument("need nu_pre + nu_post >= 1");
  if (config_.coarsest_level < hierarchy.k_min() ||
      config_.coarsest_level >= finest_level ||
      finest_level > hierarchy.k_max())
    throw InvalidArgument("need k_min <= coarsest level < finest level <= "
                          "k_max");
  if (!(config_.tolerance > 0.0))
    throw InvalidArgument("tolerance must be positive");
  if (config_.max_iterations < 0)
    throw InvalidArgument("max_iterations must be nonnegative");

  coarse_ = std::make_unique<CoarseSolver>(
      hierarchy.system(config_.coarsest_level));
  for (int k = config_.coarsest_level; k <= finest_level; ++k) {
    auto const n = static_cast<std::size_t>(hierarchy.system(k).size());
    if (k == config_.coarsest_level) {
      smoothers_.push_back(nullptr);
      scratch_.push_back({});
      continue;
    }
    smoothers_.push_back(make_smoother(config_.smoother, hierarchy.system(k),
                                       hierarchy.columns(k), hierarchy.mesh(k)));
    auto const nc = static_cast<std::size_t>(hierarchy.system(k - 1).size());
    scratch_.push_back({Vector(n), Vector(nc), Vector(nc), Vector(n)});
  }
}

void MultigridSolver::residual(int level, std::span<const double> x,
                               std::span<const double> f,
                               std::span<double> r) const
{
  hierarchy_.system(level).matrix.matvec(x, r);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = f[i] - r[i];
}

void MultigridSolver::cycle(std::span<double> x, std::span<const double> f)
{
  auto const n = static_cast<std::size_t>(hierarchy_.system(finest_).size());
  if (x.size() != n || f.size() != n)
    throw DimensionMismatch("cycle: vectors do not match the finest level");
  cycle(finest_, x, f);
}

void MultigridSolver::cycle(int level, std::span<double> x,
                            std::span<const double> f)
{
  auto const &system = hierarchy_.system(level);
  if (level == config_.coarsest_level) {
    coarse_->solve(f, x);
    return;
  }
  auto &s = scratch_[index(level)];
  auto &smoother = *smoothers_[index(level)];

  residual(level, x, f, s.r);
  for (int m = 0; m < config_.nu_pre; ++m)
    smoother.sweep(x, s.r);

  auto const &transfer = hierarchy_.transfer(level);
  transfer.restriction.matvec(s.r, s.coarse_f);
  std::fill(s.coarse_x.begin(), s.coarse_x.end(), 0.0);
  int const visits =
      (config_.cycle == CycleType::W && level - 1 > config_.coarsest_level) ? 2
                                                                            : 1;
  for (int v = 0; v < visits; ++v)
    cycle(level - 1, s.coarse_x, s.coarse_f);

  transfer.prolongation.matvec(s.coarse_x, s.correction);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] += s.correction[i];
  project_nullspace(system, x);

  residual(level, x, f, s.r);
  for (int m = 0; m < config_.nu_post; ++m)
    smoother.sweep(x, s.r);
  project_nullspace(system, x);
}

SolveReport MultigridSolver::solve()
{
  auto x = random_initial_guess(
      static_cast<std::size_t>(hierarchy_.system(finest_).size()),
      config_.seed);
  return solve_homogeneous(x);
}

SolveReport MultigridSolver::solve_homogeneous(std::span<double> x)
{
  auto const &system = hierarchy_.system(finest_);
  if (x.size() != static_cast<std::size_t>(system.size()))
    throw DimensionMismatch("solve: initial guess has wrong length");
  auto const start = std::chrono::steady_clock::now();

  SolveReport report;
  report.seed = config_.seed;
  // Components in the kernel are not part of the error.
  project_nullspace(system, x);
  Vector const zero(x.size(), 0.0);
  double const initial = l_norm(x, system.norm_diag);
  report.norm_history.push_back(initial);
  report.converged = initial == 0.0;

  while (!report.converged && report.iterations < config_.max_iterations) {
    cycle(finest_, x, zero);
    ++report.iterations;
    double const norm = l_norm(x, system.norm_diag);
    report.norm_history.push_back(norm);
    if (norm <= config_.tolerance * initial) {
      report.converged = true;
    } else if (!std::isfinite(norm) || norm > 1e6 * initial) {
      report.diverged = true;
      break;
    }
  }
  report.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return report;
}

} // namespace aaomg
