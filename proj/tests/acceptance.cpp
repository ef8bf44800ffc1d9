// Acceptance suite: one PASS/FAIL line per criterion, failing details below
// it. Exit status is nonzero when any selected criterion fails.
#include "aaomg/analysis.hpp"
#include "aaomg/multigrid.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace aaomg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double alphas[] = {1.0, 1e-6, 1e-12};

std::string alpha_label(double a)
{
  return a == 1.0 ? "1" : a == 1e-6 ? "1e-6" : "1e-12";
}

// Reference iteration counts, indexed [smoother][alpha][level - first level].
struct ReferenceTable
{
  Problem problem;
  int first_level;
  std::vector<SmootherType> smoothers;
  std::vector<std::array<std::array<int, 4>, 3>> counts;
};

// Poisson control, levels 5..8.
ReferenceTable const table_poisson{
    Problem::PoissonControl,
    5,
    {SmootherType::NormalEquation, SmootherType::Lsgs,
     SmootherType::SymmetricLsgs, SmootherType::CollectiveGs},
    {{{{{26, 27, 27, 27}}, {{31, 28, 28, 27}}, {{28, 29, 31, 25}}}},
     {{{{11, 11, 11, 11}}, {{9, 11, 11, 11}}, {{7, 7, 6, 3}}}},
     {{{{14, 14, 14, 14}}, {{12, 14, 14, 14}}, {{14, 13, 12, 7}}}},
     {{{{5, 5, 5, 5}}, {{5, 5, 5, 5}}, {{3, 3, 3, 4}}}}}};

// Stokes control, levels 4..7.
ReferenceTable const table_stokes{
    Problem::StokesControl,
    4,
    {SmootherType::NormalEquation, SmootherType::Lsgs,
     SmootherType::SymmetricLsgs, SmootherType::Vanka},
    {{{{{31, 32, 32, 32}}, {{31, 30, 31, 31}}, {{60, 55, 44, 37}}}},
     {{{{13, 14, 14, 14}}, {{12, 13, 13, 14}}, {{14, 12, 9, 6}}}},
     {{{{17, 18, 18, 18}}, {{16, 16, 17, 17}}, {{22, 19, 12, 9}}}},
     {{{{11, 11, 11, 11}}, {{10, 10, 11, 11}}, {{7, 7, 7, 9}}}}}};

struct Cell
{
  int iterations = 0;
  bool converged = false;
};

// measured[smoother][alpha index][level index]
using Measured = std::map<SmootherType, std::array<std::array<Cell, 4>, 3>>;

struct Result
{
  bool passed = true;
  std::vector<std::string> details;

  void fail(std::string msg)
  {
    passed = false;
    details.push_back(std::move(msg));
  }
};

Measured run_table(ReferenceTable const &ref, double &wall)
{
  auto const t0 = Clock::now();
  Measured m;
  int const k_max = ref.first_level + 3;
  for (std::size_t ai = 0; ai < 3; ++ai) {
    Hierarchy const h(ref.problem, ref.problem == Problem::StokesControl ? 1 : 0,
                      k_max, alphas[ai]);
    for (auto t : ref.smoothers)
      for (int li = 0; li < 4; ++li) {
        MultigridSolver mg(h, ref.first_level + li,
                           CycleConfig::defaults(t, ref.problem));
        auto const r = mg.solve();
        m[t][ai][static_cast<std::size_t>(li)] = {r.iterations, r.converged};
      }
  }
  wall = seconds_since(t0);
  return m;
}

void print_table(ReferenceTable const &ref, Measured const &m)
{
  std::printf("  %s: measured (reference)\n", to_string(ref.problem));
  std::printf("  %-3s", "k");
  for (auto t : ref.smoothers)
    for (double a : alphas)
      std::printf(" %13s", (std::string(to_string(t)) + " " + alpha_label(a)).c_str());
  std::printf("\n");
  for (int li = 0; li < 4; ++li) {
    std::printf("  %-3d", ref.first_level + li);
    for (std::size_t si = 0; si < ref.smoothers.size(); ++si)
      for (std::size_t ai = 0; ai < 3; ++ai) {
        auto const &c = m.at(ref.smoothers[si])[ai][static_cast<std::size_t>(li)];
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s%d (%d)", c.converged ? "" : "!",
                      c.iterations, ref.counts[si][ai][static_cast<std::size_t>(li)]);
        std::printf(" %13s", buf);
      }
    std::printf("\n");
  }
}

std::string where(ReferenceTable const &ref, SmootherType t, std::size_t ai,
                  int li)
{
  std::ostringstream os;
  os << to_string(t) << " a=" << alpha_label(alphas[ai])
     << " k=" << ref.first_level + li;
  return os.str();
}

// Every cell converged and within +-50% of the reference count.
void check_band(ReferenceTable const &ref, Measured const &m, Result &res)
{
  for (std::size_t si = 0; si < ref.smoothers.size(); ++si)
    for (std::size_t ai = 0; ai < 3; ++ai)
      for (int li = 0; li < 4; ++li) {
        auto const t = ref.smoothers[si];
        auto const &c = m.at(t)[ai][static_cast<std::size_t>(li)];
        int const expected = ref.counts[si][ai][static_cast<std::size_t>(li)];
        if (!c.converged)
          res.fail(where(ref, t, ai, li) + ": did not converge");
        else if (std::abs(c.iterations - expected) > 0.5 * expected)
          res.fail(where(ref, t, ai, li) + ": " + std::to_string(c.iterations) +
                   " outside +-50% of " + std::to_string(expected));
        else if (c.iterations > 2 * expected)
          res.fail(where(ref, t, ai, li) + ": more than twice the reference");
      }
}

int its(Measured const &m, SmootherType t, std::size_t ai, int li)
{
  return m.at(t)[ai][static_cast<std::size_t>(li)].iterations;
}

Result criterion_table1(double &wall, Measured &out)
{
  Result res;
  auto const m = run_table(table_poisson, wall);
  out = m;
  print_table(table_poisson, m);
  check_band(table_poisson, m, res);
  for (std::size_t ai = 0; ai < 3; ++ai)
    for (int li = 0; li < 4; ++li) {
      int const normal = its(m, SmootherType::NormalEquation, ai, li);
      int const lsgs = its(m, SmootherType::Lsgs, ai, li);
      int const cgs = its(m, SmootherType::CollectiveGs, ai, li);
      std::string const at =
          "a=" + alpha_label(alphas[ai]) + " k=" + std::to_string(5 + li);
      if (!(cgs < lsgs && lsgs < normal))
        res.fail("ordering cgs < lsgs < normal violated at " + at + ": " +
                 std::to_string(cgs) + ", " + std::to_string(lsgs) + ", " +
                 std::to_string(normal));
      if (lsgs > 0.7 * normal)
        res.fail("lsgs > 0.7 normal at " + at);
    }
  if (wall > 600.0)
    res.fail("runtime " + std::to_string(wall) + " s exceeds 10 min");
  return res;
}

Result criterion_table2(double &wall, Measured &out)
{
  Result res;
  auto const m = run_table(table_stokes, wall);
  print_table(table_stokes, m);
  check_band(table_stokes, m, res);
  for (std::size_t ai = 0; ai < 3; ++ai)
    for (int li = 0; li < 4; ++li) {
      int const normal = its(m, SmootherType::NormalEquation, ai, li);
      int const lsgs = its(m, SmootherType::Lsgs, ai, li);
      int const vanka = its(m, SmootherType::Vanka, ai, li);
      std::string const at =
          "a=" + alpha_label(alphas[ai]) + " k=" + std::to_string(4 + li);
      if (ai < 2 && lsgs > 0.7 * normal)
        res.fail("lsgs > 0.7 normal at " + at + ": " + std::to_string(lsgs) +
                 " vs " + std::to_string(normal));
      if (vanka > lsgs + 3)
        res.fail("vanka > lsgs + 3 at " + at + ": " + std::to_string(vanka) +
                 " vs " + std::to_string(lsgs));
    }
  if (wall > 1200.0)
    res.fail("runtime " + std::to_string(wall) + " s exceeds 20 min");
  out = m;
  return res;
}

void check_robust(ReferenceTable const &ref, Measured const &m,
                  std::function<bool(SmootherType, std::size_t)> const &included,
                  Result &res)
{
  for (auto t : ref.smoothers)
    for (std::size_t ai = 0; ai < 3; ++ai) {
      if (!included(t, ai))
        continue;
      std::vector<double> col;
      for (auto const &c : m.at(t)[ai])
        col.push_back(c.iterations);
      auto sorted = col;
      std::sort(sorted.begin(), sorted.end());
      double const median = 0.5 * (sorted[1] + sorted[2]);
      for (std::size_t li = 0; li < col.size(); ++li)
        if (std::abs(col[li] - median) > 0.5 * median || !m.at(t)[ai][li].converged)
          res.fail(std::string(to_string(ref.problem)) + " " +
                   where(ref, t, ai, static_cast<int>(li)) + ": " +
                   std::to_string(static_cast<int>(col[li])) +
                   " vs column median " + std::to_string(median));
    }
}

Result criterion_robustness(Measured const *poisson, Measured const *stokes)
{
  Result res;
  if (poisson)
    check_robust(table_poisson, *poisson,
                 [](SmootherType, std::size_t) { return true; }, res);
  if (stokes)
    check_robust(table_stokes, *stokes,
                 [](SmootherType t, std::size_t ai) {
                   return !(t == SmootherType::NormalEquation && ai == 2);
                 },
                 res);
  return res;
}

Result criterion_lemma1()
{
  Result res;
  auto const t0 = Clock::now();
  struct Case
  {
    Problem problem;
    int level;
  };
  for (auto c : {Case{Problem::PoissonControl, 2}, Case{Problem::PoissonControl, 3},
                 Case{Problem::StokesControl, 1}, Case{Problem::StokesControl, 2}}) {
    MeshLevel const mesh(c.level);
    for (double a : alphas) {
      auto const s = build_system(c.problem, mesh, a);
      auto const r = lemma1_check(s, mesh, 30);
      double const min_margin = *std::min_element(r.margin.begin(), r.margin.end());
      std::printf("  %s k=%d a=%s: c_bar=%.4f nnz=%lld delta=%.3f min margin=%.1f\n",
                  to_string(c.problem), c.level, alpha_label(a).c_str(), r.c_bar,
                  static_cast<long long>(r.nnz), r.inverse_inequality_delta,
                  min_margin);
      if (!r.passed)
        res.fail(std::string(to_string(c.problem)) + " k=" + std::to_string(c.level) +
                 " a=" + alpha_label(a) + ": bound violated at nu=" +
                 std::to_string(r.first_violation));
    }
  }
  double const wall = seconds_since(t0);
  std::printf("  runtime %.1f s\n", wall);
  if (wall > 60.0)
    res.fail("runtime " + std::to_string(wall) + " s exceeds 1 min");
  return res;
}

Result criterion_stability()
{
  Result res;
  for (auto problem : {Problem::PoissonControl, Problem::StokesControl}) {
    int const level = 2;
    MeshLevel const mesh(level);
    std::vector<double> upper, inv_lower;
    for (double a : alphas) {
      auto const c = stability_constants(build_system(problem, mesh, a));
      std::printf("  %s k=%d a=%s: c_lower=%.4f c_upper=%.4f\n", to_string(problem),
                  level, alpha_label(a).c_str(), c.lower, c.upper);
      upper.push_back(c.upper);
      inv_lower.push_back(1.0 / c.lower);
    }
    auto spread = [](std::vector<double> const &v) {
      auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      return *hi / *lo;
    };
    if (spread(upper) >= 3.0)
      res.fail(std::string(to_string(problem)) + ": c_upper varies by " +
               std::to_string(spread(upper)));
    if (spread(inv_lower) >= 3.0)
      res.fail(std::string(to_string(problem)) + ": 1/c_lower varies by " +
               std::to_string(spread(inv_lower)));
  }
  return res;
}

Result criterion_oracles()
{
  Result res;
  double worst_sweep = 0.0;
  struct Case
  {
    Problem problem;
    int level;
  };
  for (auto c : {Case{Problem::PoissonControl, 1}, Case{Problem::PoissonControl, 2},
                 Case{Problem::StokesControl, 1}, Case{Problem::StokesControl, 2}})
    for (double a : alphas) {
      Hierarchy const h(c.problem, c.level, c.level, a);
      auto const &s = h.system(c.level);
      for (auto t : {SmootherType::NormalEquation, SmootherType::Lsgs,
                     SmootherType::SymmetricLsgs, SmootherType::CollectiveGs,
                     SmootherType::Vanka}) {
        if (!applicable(t, c.problem))
          continue;
        auto const kind = SmootherKind::defaults(t, c.problem);
        auto sm = make_smoother(kind, s, h.columns(c.level), h.mesh(c.level));
        Eigen::MatrixXd oracle;
        if (t == SmootherType::CollectiveGs)
          oracle = testing::collective_gs_operator(s);
        else if (t == SmootherType::Vanka)
          oracle = testing::subspace_correction_operator(
              s, build_vanka_patches(s, h.mesh(c.level)), kind.damping);
        else
          oracle = testing::closed_form_operator(kind, s);
        double const d =
            testing::scaled_operator_diff(s, testing::dense(sweep_operator(*sm)), oracle);
        worst_sweep = std::max(worst_sweep, d);
        if (d > 1e-11)
          res.fail(std::string(to_string(c.problem)) + " k=" +
                   std::to_string(c.level) + " a=" + alpha_label(a) + " " +
                   to_string(t) + ": sweep vs oracle " + std::to_string(d));
      }
    }

  double worst_rap = 0.0;
  for (auto problem : {Problem::PoissonControl, Problem::StokesControl})
    for (double a : alphas) {
      int const k_min = problem == Problem::StokesControl ? 1 : 0;
      int const k_max = problem == Problem::StokesControl ? 7 : 8;
      Hierarchy const h(problem, k_min, k_max, a);
      for (int k = k_min + 1; k <= k_max; ++k) {
        auto const &t = h.transfer(k);
        auto const rap =
            multiply(t.restriction, multiply(h.system(k).matrix, t.prolongation));
        auto const &ac = h.system(k - 1).matrix;
        auto const diff = add(rap, ac, -1.0);
        double scale = 0.0, err = 0.0;
        for (double v : ac.values())
          scale = std::max(scale, std::abs(v));
        for (double v : diff.values())
          err = std::max(err, std::abs(v));
        worst_rap = std::max(worst_rap, err / scale);
        if (err > 1e-12 * scale)
          res.fail(std::string(to_string(problem)) + " a=" + alpha_label(a) +
                   " levels " + std::to_string(k - 1) + "/" + std::to_string(k) +
                   ": RAP error " + std::to_string(err / scale));
      }
    }
  std::printf("  worst sweep/oracle difference %.2e, worst Galerkin error %.2e\n",
              worst_sweep, worst_rap);
  return res;
}

Result criterion_invariants()
{
  Result res;
  for (auto problem : {Problem::PoissonControl, Problem::StokesControl})
    for (double a : alphas) {
      int const k = 3;
      Hierarchy const h(problem, 1, k, a);
      auto const &s = h.system(k);
      auto const n = static_cast<std::size_t>(s.size());
      std::string const tag =
          std::string(to_string(problem)) + " a=" + alpha_label(a) + " ";
      for (auto t : {SmootherType::NormalEquation, SmootherType::Lsgs,
                     SmootherType::SymmetricLsgs, SmootherType::CollectiveGs,
                     SmootherType::Vanka}) {
        if (!applicable(t, problem))
          continue;
        auto sm = make_smoother(SmootherKind::defaults(t, problem), s,
                                h.columns(k), h.mesh(k));
        auto x = random_initial_guess(n, 101);
        auto const x0 = x;
        Vector r(n, 0.0);
        sm->sweep(x, r);
        if (x != x0 || std::any_of(r.begin(), r.end(), [](double v) { return v != 0.0; }))
          res.fail(tag + to_string(t) + ": zero residual moved the iterate");

        auto const f = random_initial_guess(n, 102);
        r = s.matrix * x;
        for (std::size_t i = 0; i < n; ++i)
          r[i] = f[i] - r[i];
        for (int sweep = 0; sweep < 3; ++sweep)
          sm->sweep(x, r);
        auto const ax = s.matrix * x;
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          err = std::max(err, std::abs(f[i] - ax[i] - r[i]));
          scale = std::max({scale, std::abs(f[i]), std::abs(ax[i])});
        }
        if (err > 1e-11 * scale)
          res.fail(tag + to_string(t) + ": residual drift " +
                   std::to_string(err / scale));

        // full cycle: zero stays zero, the exact solution is reproduced
        MultigridSolver mg(h, k, CycleConfig::defaults(t, problem));
        Vector zero(n, 0.0);
        if (mg.solve_homogeneous(zero).iterations != 0)
          res.fail(tag + to_string(t) + ": zero start needed iterations");
        auto z = random_initial_guess(n, 103);
        project_nullspace(s, z);
        auto const rhs = s.matrix * z;
        auto y = z;
        mg.cycle(y, rhs);
        project_nullspace(s, y);
        Vector d(n);
        for (std::size_t i = 0; i < n; ++i)
          d[i] = y[i] - z[i];
        double const rel = l_norm(d, s.norm_diag) / l_norm(z, s.norm_diag);
        if (rel > 1e-9)
          res.fail(tag + to_string(t) + ": cycle moved the exact solution by " +
                   std::to_string(rel));
      }
    }
  return res;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "criteria to run (default all)")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  std::set<int> selected(only.begin(), only.end());
  if (selected.empty())
    selected = {1, 2, 3, 4, 5, 6, 7};

  int failures = 0;
  auto report = [&](int id, std::string const &name, Result const &r) {
    std::printf("[%s] criterion %d: %s\n", r.passed ? "PASS" : "FAIL", id,
                name.c_str());
    for (auto const &d : r.details)
      std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    failures += !r.passed;
  };

  Measured poisson, stokes;
  bool have_poisson = false, have_stokes = false;
  if (selected.count(1) || selected.count(3)) {
    double wall = 0.0;
    auto const r = criterion_table1(wall, poisson);
    have_poisson = true;
    std::printf("  runtime %.1f s\n", wall);
    if (selected.count(1))
      report(1, "Poisson iteration counts within +-50% of the reference, "
                "cgs < lsgs < normal, lsgs <= 0.7 normal, under 10 min", r);
  }
  if (selected.count(2) || selected.count(3)) {
    double wall = 0.0;
    auto const r = criterion_table2(wall, stokes);
    have_stokes = true;
    std::printf("  runtime %.1f s\n", wall);
    if (selected.count(2))
      report(2, "Stokes iteration counts within +-50% of the reference, "
                "lsgs <= 0.7 normal, vanka <= lsgs + 3, under 20 min", r);
  }
  if (selected.count(3))
    report(3, "every column within [0.5, 1.5] of its median over levels",
           criterion_robustness(have_poisson ? &poisson : nullptr,
                                have_stokes ? &stokes : nullptr));
  if (selected.count(4))
    report(4, "smoothing bound holds for nu <= 30 on small levels, under 1 min",
           criterion_lemma1());
  if (selected.count(5))
    report(5, "stability constants vary by less than 3x over alpha",
           criterion_stability());
  if (selected.count(6))
    report(6, "sweeps match dense oracles (1e-11), Galerkin identity (1e-12)",
           criterion_oracles());
  if (selected.count(7))
    report(7, "fixed point and residual coherence of smoothers and cycle",
           criterion_invariants());
  return failures == 0 ? 0 : 1;
}
