#include "aaomg/aaomg.h"

#include "aaomg/analysis.hpp"
#include "aaomg/error.hpp"
#include "aaomg/multigrid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <new>
#include <string>

struct aaomg_hierarchy
{
  aaomg::Hierarchy impl;
};

namespace {

thread_local std::string last_error;

aaomg_status fail(aaomg_status status, std::string message)
{
  last_error = std::move(message);
  return status;
}

// Runs f and maps library exceptions onto status codes.
template <class F> aaomg_status guarded(F &&f)
{
  try {
    last_error.clear();
    return f();
  } catch (aaomg::InvalidArgument const &e) {
    return fail(AAOMG_INVALID_ARGUMENT, e.what());
  } catch (aaomg::DimensionMismatch const &e) {
    return fail(AAOMG_DIMENSION_MISMATCH, e.what());
  } catch (aaomg::SingularMatrix const &e) {
    return fail(AAOMG_SINGULAR, e.what());
  } catch (std::bad_alloc const &) {
    return fail(AAOMG_INTERNAL_ERROR, "out of memory");
  } catch (std::exception const &e) {
    return fail(AAOMG_INTERNAL_ERROR, e.what());
  }
}

bool valid(aaomg_problem p)
{
  return p == AAOMG_POISSON || p == AAOMG_STOKES;
}

bool valid(aaomg_smoother s)
{
  return s >= AAOMG_NORMAL && s <= AAOMG_VANKA;
}

aaomg::Problem to_problem(aaomg_problem p)
{
  return p == AAOMG_STOKES ? aaomg::Problem::StokesControl
                           : aaomg::Problem::PoissonControl;
}

aaomg::SmootherType to_smoother(aaomg_smoother s)
{
  return static_cast<aaomg::SmootherType>(s);
}

void check_level(aaomg_hierarchy const *h, int k)
{
  if (!h)
    throw aaomg::InvalidArgument("null hierarchy");
  if (k < h->impl.k_min() || k > h->impl.k_max())
    throw aaomg::InvalidArgument("level " + std::to_string(k) +
                                 " not in hierarchy");
}

} // namespace

extern "C" {

char const *aaomg_version(void)
{
  return "0.1.0";
}

char const *aaomg_status_string(aaomg_status status)
{
  switch (status) {
  case AAOMG_OK:
    return "ok";
  case AAOMG_INVALID_ARGUMENT:
    return "invalid argument";
  case AAOMG_DIMENSION_MISMATCH:
    return "dimension mismatch";
  case AAOMG_SINGULAR:
    return "singular matrix";
  case AAOMG_IO_ERROR:
    return "i/o error";
  case AAOMG_BUFFER_TOO_SMALL:
    return "buffer too small";
  case AAOMG_INTERNAL_ERROR:
    return "internal error";
  }
  return "unknown status";
}

char const *aaomg_last_error(void)
{
  return last_error.c_str();
}

char const *aaomg_smoother_name(aaomg_smoother smoother)
{
  if (!valid(smoother))
    return "unknown";
  return aaomg::to_string(to_smoother(smoother));
}

aaomg_status aaomg_parse_smoother(char const *name, aaomg_smoother *out)
{
  if (!name || !out)
    return fail(AAOMG_INVALID_ARGUMENT, "null argument");
  auto t = aaomg::parse_smoother(name);
  if (!t)
    return fail(AAOMG_INVALID_ARGUMENT,
                std::string("unknown smoother '") + name + "'");
  *out = static_cast<aaomg_smoother>(*t);
  return AAOMG_OK;
}

int aaomg_smoother_applicable(aaomg_smoother smoother, aaomg_problem problem)
{
  if (!valid(smoother) || !valid(problem))
    return 0;
  return aaomg::applicable(to_smoother(smoother), to_problem(problem)) ? 1 : 0;
}

aaomg_status aaomg_hierarchy_create(aaomg_problem problem, int k_min,
                                    int k_max, double alpha,
                                    aaomg_hierarchy **out)
{
  return guarded([&] {
    if (!out)
      return fail(AAOMG_INVALID_ARGUMENT, "null output pointer");
    *out = nullptr;
    if (!valid(problem))
      return fail(AAOMG_INVALID_ARGUMENT, "unknown problem");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      return fail(AAOMG_INVALID_ARGUMENT, "alpha must be positive");
    *out = new aaomg_hierarchy{
        aaomg::Hierarchy(to_problem(problem), k_min, k_max, alpha)};
    return AAOMG_OK;
  });
}

void aaomg_hierarchy_destroy(aaomg_hierarchy *h)
{
  delete h;
}

aaomg_status aaomg_hierarchy_dimension(aaomg_hierarchy const *h, int k,
                                       int64_t *out)
{
  return guarded([&] {
    check_level(h, k);
    if (!out)
      return fail(AAOMG_INVALID_ARGUMENT, "null output pointer");
    *out = h->impl.system(k).size();
    return AAOMG_OK;
  });
}

aaomg_status aaomg_solve_options_default(aaomg_smoother smoother,
                                         aaomg_problem problem,
                                         aaomg_solve_options *out)
{
  if (!out)
    return fail(AAOMG_INVALID_ARGUMENT, "null output pointer");
  if (!valid(smoother) || !valid(problem))
    return fail(AAOMG_INVALID_ARGUMENT, "unknown smoother or problem");
  auto const c =
      aaomg::CycleConfig::defaults(to_smoother(smoother), to_problem(problem));
  out->smoother = smoother;
  out->cycle = c.cycle == aaomg::CycleType::W ? AAOMG_W_CYCLE : AAOMG_V_CYCLE;
  out->nu_pre = c.nu_pre;
  out->nu_post = c.nu_post;
  out->damping = c.smoother.damping;
  out->coarsest_level = c.coarsest_level;
  out->max_iterations = c.max_iterations;
  out->tolerance = c.tolerance;
  out->seed = c.seed;
  return AAOMG_OK;
}

aaomg_status aaomg_solve(aaomg_hierarchy const *h, int k,
                         aaomg_solve_options const *options,
                         aaomg_solve_result *result, double *history,
                         size_t history_capacity, size_t *history_length)
{
  return guarded([&] {
    check_level(h, k);
    if (!options || !result)
      return fail(AAOMG_INVALID_ARGUMENT, "null argument");
    if (!valid(options->smoother))
      return fail(AAOMG_INVALID_ARGUMENT, "unknown smoother");
    if (options->cycle != AAOMG_V_CYCLE && options->cycle != AAOMG_W_CYCLE)
      return fail(AAOMG_INVALID_ARGUMENT, "unknown cycle type");
    aaomg::CycleConfig c;
    c.cycle = options->cycle == AAOMG_W_CYCLE ? aaomg::CycleType::W
                                              : aaomg::CycleType::V;
    c.nu_pre = options->nu_pre;
    c.nu_post = options->nu_post;
    c.smoother = {to_smoother(options->smoother), options->damping};
    c.coarsest_level = options->coarsest_level;
    c.max_iterations = options->max_iterations;
    c.tolerance = options->tolerance;
    c.seed = options->seed;

    aaomg::MultigridSolver solver(h->impl, k, c);
    auto const report = solver.solve();
    result->iterations = report.iterations;
    result->converged = report.converged ? 1 : 0;
    result->diverged = report.diverged ? 1 : 0;
    result->wall_seconds = report.wall_seconds;
    result->initial_norm = report.norm_history.front();
    result->final_norm = report.norm_history.back();
    if (history_length)
      *history_length = report.norm_history.size();
    if (history) {
      auto const n = std::min(history_capacity, report.norm_history.size());
      std::copy_n(report.norm_history.begin(), n, history);
      if (n < report.norm_history.size())
        return fail(AAOMG_BUFFER_TOO_SMALL,
                    "history truncated to " + std::to_string(n) + " entries");
    }
    return AAOMG_OK;
  });
}

aaomg_status aaomg_stability_constants(aaomg_hierarchy const *h, int k,
                                       aaomg_stability *out)
{
  return guarded([&] {
    check_level(h, k);
    if (!out)
      return fail(AAOMG_INVALID_ARGUMENT, "null output pointer");
    auto const c = aaomg::stability_constants(h->impl.system(k));
    out->lower = c.lower;
    out->upper = c.upper;
    return AAOMG_OK;
  });
}

aaomg_status aaomg_smoothing_curve(aaomg_hierarchy const *h, int k,
                                   aaomg_smoother smoother, double damping,
                                   int nu_max, double *eta, double *bound,
                                   double *c_bar)
{
  return guarded([&] {
    check_level(h, k);
    if (!eta)
      return fail(AAOMG_INVALID_ARGUMENT, "null output buffer");
    if (!valid(smoother))
      return fail(AAOMG_INVALID_ARGUMENT, "unknown smoother");
    auto const curve = aaomg::smoothing_norm(
        h->impl.system(k), h->impl.mesh(k), {to_smoother(smoother), damping},
        nu_max);
    std::copy(curve.eta_measured.begin(), curve.eta_measured.end(), eta);
    if (bound)
      std::copy(curve.eta_bound.begin(), curve.eta_bound.end(), bound);
    if (c_bar)
      *c_bar = curve.c_bar;
    return AAOMG_OK;
  });
}

aaomg_status aaomg_lemma1_check(aaomg_hierarchy const *h, int k, int nu_max,
                                aaomg_lemma1 *out)
{
  return guarded([&] {
    check_level(h, k);
    if (!out)
      return fail(AAOMG_INVALID_ARGUMENT, "null output pointer");
    auto const r = aaomg::lemma1_check(h->impl.system(k), h->impl.mesh(k),
                                       nu_max);
    out->passed = r.passed ? 1 : 0;
    out->first_violation = r.first_violation;
    out->c_bar = r.c_bar;
    out->nnz = r.nnz;
    out->inverse_inequality_delta = r.inverse_inequality_delta;
    out->min_margin = *std::min_element(r.margin.begin(), r.margin.end());
    return AAOMG_OK;
  });
}

aaomg_status aaomg_normal_equation_radius(aaomg_hierarchy const *h, int k,
                                          double tau, double *out)
{
  return guarded([&] {
    check_level(h, k);
    if (!out)
      return fail(AAOMG_INVALID_ARGUMENT, "null output pointer");
    *out = aaomg::normal_equation_radius(h->impl.system(k), tau);
    return AAOMG_OK;
  });
}

aaomg_status aaomg_write_matrix(aaomg_hierarchy const *h, int k,
                                char const *path)
{
  return guarded([&] {
    check_level(h, k);
    if (!path)
      return fail(AAOMG_INVALID_ARGUMENT, "null path");
    std::ofstream os(path);
    if (!os)
      return fail(AAOMG_IO_ERROR, std::string("cannot open ") + path);
    aaomg::write_matrix_market(os, h->impl.system(k).matrix);
    if (!os)
      return fail(AAOMG_IO_ERROR, std::string("write failed: ") + path);
    return AAOMG_OK;
  });
}

aaomg_status aaomg_write_mesh(aaomg_hierarchy const *h, int k, char const *path)
{
  return guarded([&] {
    check_level(h, k);
    if (!path)
      return fail(AAOMG_INVALID_ARGUMENT, "null path");
    std::ofstream os(path);
    if (!os)
      return fail(AAOMG_IO_ERROR, std::string("cannot open ") + path);
    aaomg::write_mesh(os, h->impl.mesh(k));
    if (!os)
      return fail(AAOMG_IO_ERROR, std::string("write failed: ") + path);
    return AAOMG_OK;
  });
}

} // extern "C"
