#include "aaomg/error.hpp"
#include "aaomg/multigrid.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace aaomg;
using testing::dense;

namespace {

double field_max(BlockSystem const &s, std::string const &name,
                 Vector const &x)
{
  auto const &f = s.layout.field(name);
  double m = 0.0;
  for (Index i = 0; i < f.size; ++i)
    m = std::max(m, std::abs(x[static_cast<std::size_t>(f.offset + i)]));
  return m;
}

} // namespace

TEST_CASE("L norm by hand")
{
  Vector const x{1, -2, 3};
  Vector const l{4, 1, 0.5};
  CHECK(l_norm(x, l) == doctest::Approx(std::sqrt(4 + 4 + 4.5)));
  CHECK(l_norm(Vector{}, Vector{}) == 0.0);
}

TEST_CASE("random initial guess")
{
  auto const a = random_initial_guess(1000, 3);
  auto const b = random_initial_guess(1000, 3);
  auto const c = random_initial_guess(1000, 4);
  CHECK(a == b);
  CHECK(a != c);
  double lo = 1.0, hi = -1.0;
  for (double v : a) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo < -0.9);
  CHECK(hi > 0.9);
}

TEST_CASE("nullspace projection")
{
  Hierarchy const h(Problem::StokesControl, 2, 2, 1.0);
  auto const &s = h.system(2);
  auto x = random_initial_guess(static_cast<std::size_t>(s.size()), 9);
  for (double &v : x)
    v += 5.0;
  project_nullspace(s, x);
  CHECK(std::abs(field_mean(s, "p", x)) <= 1e-14);
  CHECK(std::abs(field_mean(s, "mu", x)) <= 1e-14);
  // velocities untouched
  CHECK(x[0] >= 4.0);
  CHECK_THROWS_AS(field_mean(s, "v", x), InvalidArgument);

  Hierarchy const hp(Problem::PoissonControl, 2, 2, 1.0);
  auto y = random_initial_guess(static_cast<std::size_t>(hp.system(2).size()), 9);
  auto const y0 = y;
  project_nullspace(hp.system(2), y);
  CHECK(y == y0);
}

TEST_CASE("coarse solver")
{
  for (auto problem : {Problem::PoissonControl, Problem::StokesControl})
    for (double alpha : {1.0, 1e-12}) {
      CAPTURE(to_string(problem));
      CAPTURE(alpha);
      Hierarchy const h(problem, 1, 2, alpha);
      auto const &s = h.system(2);
      auto const n = static_cast<std::size_t>(s.size());
      auto z = random_initial_guess(n, 11);
      project_nullspace(s, z);
      auto const f = s.matrix * z;
      CoarseSolver const cs(s);
      Vector x(n, 0.0);
      cs.solve(f, x);
      Vector err(n);
      for (std::size_t i = 0; i < n; ++i)
        err[i] = x[i] - z[i];
      Eigen::VectorXd const res = dense(s.matrix) * testing::eig(x) - testing::eig(f);
      CHECK(res.cwiseAbs().maxCoeff() <=
            1e-10 * testing::eig(f).cwiseAbs().maxCoeff());
      // forward error in the L norm, where A is uniformly well conditioned
      CAPTURE(l_norm(err, s.norm_diag) / l_norm(z, s.norm_diag));
      CHECK(l_norm(err, s.norm_diag) <= 1e-8 * l_norm(z, s.norm_diag));
      if (problem == Problem::StokesControl) {
        CHECK(std::abs(field_mean(s, "p", x)) <= 1e-12 * field_max(s, "p", x));
        CHECK(std::abs(field_mean(s, "mu", x)) <= 1e-12 * field_max(s, "mu", x));
      }
    }
}

TEST_CASE("solver configuration is validated")
{
  Hierarchy const h(Problem::PoissonControl, 1, 3, 1.0);
  auto c = CycleConfig::defaults(SmootherType::Lsgs, Problem::PoissonControl);
  CHECK_NOTHROW(MultigridSolver(h, 3, c));
  auto bad = c;
  bad.nu_pre = bad.nu_post = 0;
  CHECK_THROWS_AS(MultigridSolver(h, 3, bad), InvalidArgument);
  bad = c;
  bad.coarsest_level = 3;
  CHECK_THROWS_AS(MultigridSolver(h, 3, bad), InvalidArgument);
  bad = c;
  bad.coarsest_level = 0;
  CHECK_THROWS_AS(MultigridSolver(h, 3, bad), InvalidArgument);
  bad = c;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(MultigridSolver(h, 3, bad), InvalidArgument);
  CHECK_THROWS_AS(MultigridSolver(h, 4, c), InvalidArgument);
  CHECK_THROWS_AS(
      MultigridSolver(h, 3,
                      CycleConfig::defaults(SmootherType::Vanka,
                                            Problem::PoissonControl)),
      InvalidArgument);

  auto const d = CycleConfig::defaults(SmootherType::SymmetricLsgs,
                                       Problem::StokesControl);
  CHECK(d.cycle == CycleType::W);
  CHECK(d.nu_pre == 1);
  CHECK(d.nu_post == 1);
  CHECK(CycleConfig::defaults(SmootherType::NormalEquation,
                              Problem::StokesControl)
            .smoother.damping == 0.35);
}

TEST_CASE("zero start and cycle fixed point")
{
  for (auto problem : {Problem::PoissonControl, Problem::StokesControl}) {
    CAPTURE(to_string(problem));
    Hierarchy const h(problem, 1, 3, 1e-6);
    auto const &s = h.system(3);
    auto const n = static_cast<std::size_t>(s.size());
    for (auto t : {SmootherType::NormalEquation, SmootherType::Lsgs,
                   problem == Problem::PoissonControl ? SmootherType::CollectiveGs
                                                      : SmootherType::Vanka}) {
      CAPTURE(to_string(t));
      MultigridSolver mg(h, 3, CycleConfig::defaults(t, problem));
      Vector x(n, 0.0);
      auto const report = mg.solve_homogeneous(x);
      CHECK(report.iterations == 0);
      CHECK(report.converged);
      CHECK(report.norm_history == std::vector<double>{0.0});

      // the exact solution is reproduced by a cycle
      auto z = random_initial_guess(n, 12);
      project_nullspace(s, z);
      auto const f = s.matrix * z;
      auto y = z;
      mg.cycle(y, f);
      project_nullspace(s, y);
      Eigen::VectorXd const d = testing::eig(y) - testing::eig(z);
      CHECK(d.cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("small solves converge deterministically")
{
  struct Case
  {
    Problem problem;
    SmootherType smoother;
    int max_iterations;
  };
  for (auto c : {Case{Problem::PoissonControl, SmootherType::NormalEquation, 40},
                 Case{Problem::PoissonControl, SmootherType::Lsgs, 20},
                 Case{Problem::PoissonControl, SmootherType::SymmetricLsgs, 20},
                 Case{Problem::PoissonControl, SmootherType::CollectiveGs, 10},
                 Case{Problem::StokesControl, SmootherType::Lsgs, 25},
                 Case{Problem::StokesControl, SmootherType::Vanka, 25}}) {
    CAPTURE(to_string(c.problem));
    CAPTURE(to_string(c.smoother));
    int const k = 4;
    Hierarchy const h(c.problem, 1, k, 1.0);
    auto const cfg = CycleConfig::defaults(c.smoother, c.problem);
    MultigridSolver a(h, k, cfg);
    MultigridSolver b(h, k, cfg);
    auto const ra = a.solve();
    auto const rb = b.solve();
    CHECK(ra.converged);
    CHECK_FALSE(ra.diverged);
    CHECK(ra.iterations <= c.max_iterations);
    CHECK(ra.norm_history == rb.norm_history);
    CHECK(ra.seed == cfg.seed);
    CHECK(ra.norm_history.size() == static_cast<std::size_t>(ra.iterations + 1));
    CHECK(ra.norm_history.back() <= cfg.tolerance * ra.norm_history.front());
  }
}

TEST_CASE("Stokes iterate keeps zero pressure mean")
{
  Hierarchy const h(Problem::StokesControl, 1, 3, 1.0);
  auto const &s = h.system(3);
  MultigridSolver mg(h, 3,
                     CycleConfig::defaults(SmootherType::Lsgs,
                                           Problem::StokesControl));
  auto x = random_initial_guess(static_cast<std::size_t>(s.size()), 21);
  double const p0 = field_max(s, "p", x);
  mg.solve_homogeneous(x);
  CHECK(std::abs(field_mean(s, "p", x)) <= 1e-10 * p0);
  CHECK(std::abs(field_mean(s, "mu", x)) <= 1e-10 * p0);
}

TEST_CASE("iteration cap without convergence")
{
  Hierarchy const h(Problem::PoissonControl, 1, 4, 1.0);
  auto cfg = CycleConfig::defaults(SmootherType::NormalEquation,
                                   Problem::PoissonControl);
  cfg.max_iterations = 3;
  MultigridSolver mg(h, 4, cfg);
  auto const r = mg.solve();
  CHECK(r.iterations == 3);
  CHECK_FALSE(r.converged);
  CHECK_FALSE(r.diverged);
}
