// Experiment runner: iteration-count tables and the dense analysis checks.
// Talks to the solver only through the C interface.
#include "aaomg/aaomg.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_check_failed = 2;

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

void check(aaomg_status s, char const *what)
{
  if (s == AAOMG_OK)
    return;
  std::string msg = std::string(what) + ": " + aaomg_status_string(s);
  if (*aaomg_last_error())
    msg += " (" + std::string(aaomg_last_error()) + ")";
  throw ApiError(msg);
}

struct HierarchyDeleter
{
  void operator()(aaomg_hierarchy *h) const { aaomg_hierarchy_destroy(h); }
};
using HierarchyPtr = std::unique_ptr<aaomg_hierarchy, HierarchyDeleter>;

HierarchyPtr make_hierarchy(aaomg_problem p, int k_min, int k_max, double alpha)
{
  aaomg_hierarchy *h = nullptr;
  check(aaomg_hierarchy_create(p, k_min, k_max, alpha, &h), "hierarchy");
  return HierarchyPtr(h);
}

aaomg_problem parse_problem(std::string const &s)
{
  if (s == "poisson")
    return AAOMG_POISSON;
  if (s == "stokes")
    return AAOMG_STOKES;
  throw UsageError("unknown problem '" + s + "' (poisson|stokes)");
}

char const *problem_name(aaomg_problem p)
{
  return p == AAOMG_STOKES ? "stokes" : "poisson";
}

std::vector<std::string> split(std::string const &s, char sep)
{
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep))
    if (!item.empty())
      out.push_back(item);
  return out;
}

int parse_int(std::string const &s, char const *what)
{
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (std::exception const &) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw UsageError(std::string("bad ") + what + " '" + s + "'");
  return v;
}

double parse_double(std::string const &s, char const *what)
{
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (std::exception const &) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw UsageError(std::string("bad ") + what + " '" + s + "'");
  return v;
}

std::pair<int, int> parse_levels(std::string const &s)
{
  auto const colon = s.find(':');
  int lo = 0;
  int hi = 0;
  if (colon == std::string::npos) {
    lo = hi = parse_int(s, "level");
  } else {
    lo = parse_int(s.substr(0, colon), "level");
    hi = parse_int(s.substr(colon + 1), "level");
  }
  if (lo > hi)
    throw UsageError("empty level range '" + s + "'");
  return {lo, hi};
}

struct AlphaValue
{
  std::string label;
  double value;
};

std::vector<AlphaValue> parse_alphas(std::string const &s)
{
  std::vector<AlphaValue> out;
  for (auto const &item : split(s, ',')) {
    double const a = parse_double(item, "alpha");
    if (!(a > 0.0))
      throw UsageError("alpha must be positive, got '" + item + "'");
    out.push_back({item, a});
  }
  if (out.empty())
    throw UsageError("no alpha values given");
  return out;
}

std::vector<aaomg_smoother> parse_smoothers(std::string const &s,
                                            aaomg_problem problem)
{
  std::vector<aaomg_smoother> out;
  for (auto const &item : split(s, ',')) {
    aaomg_smoother sm;
    if (aaomg_parse_smoother(item.c_str(), &sm) != AAOMG_OK)
      throw UsageError("unknown smoother '" + item +
                       "' (normal|lsgs|slsgs|cgs|vanka)");
    if (!aaomg_smoother_applicable(sm, problem))
      throw UsageError(std::string("smoother '") + item +
                       "' is not available for the " + problem_name(problem) +
                       " problem (cgs is Poisson-only, vanka Stokes-only)");
    out.push_back(sm);
  }
  if (out.empty())
    throw UsageError("no smoothers given");
  return out;
}

std::string csv_field(std::string const &s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

// ---------------------------------------------------------------- table

struct TableOptions
{
  std::string problem = "poisson";
  std::string smoothers;
  std::string levels;
  std::string alphas = "1,1e-6,1e-12";
  std::string cycle = "w";
  std::string nu;
  std::optional<double> tau;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string format = "markdown";
  int max_iter = 200;
  int coarsest = 1;
};

struct Cell
{
  int level = 0;
  aaomg_smoother smoother = AAOMG_NORMAL;
  std::string alpha;
  int iterations = 0;
  std::string status; // converged | diverged | max-iter | error
  std::string message;

  std::string text() const
  {
    if (status == "converged")
      return std::to_string(iterations);
    if (status == "error")
      return "err";
    return "div";
  }
};

int run_table(TableOptions const &o)
{
  auto const problem = parse_problem(o.problem);
  auto const smoothers = parse_smoothers(
      o.smoothers.empty() ? (problem == AAOMG_POISSON ? "normal,lsgs,slsgs,cgs"
                                                      : "normal,lsgs,slsgs,vanka")
                          : o.smoothers,
      problem);
  auto const [k_lo, k_hi] =
      parse_levels(o.levels.empty() ? (problem == AAOMG_POISSON ? "5:8" : "4:7")
                                    : o.levels);
  auto const alphas = parse_alphas(o.alphas);
  if (o.cycle != "v" && o.cycle != "w")
    throw UsageError("cycle must be v or w");
  std::optional<std::pair<int, int>> nu;
  if (!o.nu.empty()) {
    auto parts = split(o.nu, ',');
    if (parts.size() != 2)
      throw UsageError("--nu expects pre,post");
    nu = {parse_int(parts[0], "nu"), parse_int(parts[1], "nu")};
  }
  if (o.format != "markdown" && o.format != "csv" && o.format != "json")
    throw UsageError("format must be markdown, csv or json");
  if (o.coarsest >= k_lo)
    throw UsageError("coarsest level must be below the finest tested level");

  std::vector<Cell> cells;
  for (auto const &a : alphas) {
    HierarchyPtr h;
    std::string setup_error;
    try {
      h = make_hierarchy(problem, o.coarsest, k_hi, a.value);
    } catch (ApiError const &e) {
      setup_error = e.what();
    }
    for (int k = k_lo; k <= k_hi; ++k) {
      for (auto sm : smoothers) {
        Cell c;
        c.level = k;
        c.smoother = sm;
        c.alpha = a.label;
        if (!h) {
          c.status = "error";
          c.message = setup_error;
          cells.push_back(c);
          continue;
        }
        aaomg_solve_options opt;
        check(aaomg_solve_options_default(sm, problem, &opt), "options");
        opt.cycle = o.cycle == "v" ? AAOMG_V_CYCLE : AAOMG_W_CYCLE;
        if (nu) {
          opt.nu_pre = nu->first;
          opt.nu_post = nu->second;
        }
        if (o.tau && (sm == AAOMG_NORMAL || sm == AAOMG_VANKA))
          opt.damping = *o.tau;
        opt.tolerance = o.tol;
        opt.max_iterations = o.max_iter;
        opt.coarsest_level = o.coarsest;
        if (o.seed_set)
          opt.seed = o.seed;
        aaomg_solve_result res;
        auto const s =
            aaomg_solve(h.get(), k, &opt, &res, nullptr, 0, nullptr);
        if (s != AAOMG_OK) {
          c.status = "error";
          c.message = aaomg_last_error();
        } else {
          c.iterations = res.iterations;
          c.status = res.converged  ? "converged"
                     : res.diverged ? "diverged"
                                    : "max-iter";
        }
        cells.push_back(c);
      }
    }
  }

  auto find = [&](int k, aaomg_smoother sm, std::string const &a) {
    for (auto const &c : cells)
      if (c.level == k && c.smoother == sm && c.alpha == a)
        return c;
    return Cell{};
  };

  if (o.format == "markdown") {
    std::cout << "| k |";
    for (auto sm : smoothers)
      for (auto const &a : alphas)
        std::cout << ' ' << aaomg_smoother_name(sm) << " a=" << a.label << " |";
    std::cout << "\n|---|";
    for (std::size_t i = 0; i < smoothers.size() * alphas.size(); ++i)
      std::cout << "---|";
    std::cout << '\n';
    for (int k = k_lo; k <= k_hi; ++k) {
      std::cout << "| " << k << " |";
      for (auto sm : smoothers)
        for (auto const &a : alphas)
          std::cout << ' ' << find(k, sm, a.label).text() << " |";
      std::cout << '\n';
    }
  } else if (o.format == "csv") {
    std::cout << "problem,level,smoother,alpha,iterations,status\n";
    for (int k = k_lo; k <= k_hi; ++k)
      for (auto sm : smoothers)
        for (auto const &a : alphas) {
          auto const c = find(k, sm, a.label);
          std::cout << problem_name(problem) << ',' << k << ','
                    << aaomg_smoother_name(sm) << ',' << csv_field(a.label)
                    << ',' << c.iterations << ',' << c.status << '\n';
        }
  } else {
    nlohmann::ordered_json j;
    j["problem"] = problem_name(problem);
    j["cycle"] = o.cycle;
    j["tolerance"] = o.tol;
    j["cells"] = nlohmann::ordered_json::array();
    for (int k = k_lo; k <= k_hi; ++k)
      for (auto sm : smoothers)
        for (auto const &a : alphas) {
          auto const c = find(k, sm, a.label);
          nlohmann::ordered_json cell;
          cell["level"] = k;
          cell["smoother"] = aaomg_smoother_name(sm);
          cell["alpha"] = a.value;
          cell["iterations"] = c.iterations;
          cell["status"] = c.status;
          if (!c.message.empty())
            cell["message"] = c.message;
          j["cells"].push_back(cell);
        }
    std::cout << j.dump(2) << '\n';
  }

  for (auto const &c : cells)
    if (c.status == "error")
      std::cerr << "level " << c.level << ' ' << aaomg_smoother_name(c.smoother)
                << " alpha=" << c.alpha << ": " << c.message << '\n';
  return exit_ok;
}

// ------------------------------------------------------------- analysis

struct AnalysisOptions
{
  std::string problem = "both";
  std::string levels;
  std::string alphas = "1,1e-6,1e-12";
  std::string smoothers;
  int nu_max = 30;
  std::string out_dir = ".";
};

int run_analysis(AnalysisOptions const &o)
{
  std::vector<aaomg_problem> problems;
  if (o.problem == "both")
    problems = {AAOMG_POISSON, AAOMG_STOKES};
  else
    problems = {parse_problem(o.problem)};
  auto const alphas = parse_alphas(o.alphas);
  if (o.nu_max < 1)
    throw UsageError("--nu-max must be positive");

  std::filesystem::create_directories(o.out_dir);
  auto open = [&](char const *name) {
    auto const path = std::filesystem::path(o.out_dir) / name;
    std::ofstream os(path);
    if (!os)
      throw ApiError("cannot write " + path.string());
    return os;
  };
  auto curves = open("smoothing_curves.csv");
  auto stability = open("stability.csv");
  auto lemma = open("lemma1.csv");
  curves << "problem,level,alpha,smoother,nu,eta_measured,eta_bound\n";
  stability << "problem,level,alpha,c_lower,c_upper,inverse_inequality\n";
  lemma << "problem,level,alpha,passed,first_violation,c_bar,nnz,"
           "inverse_inequality_delta,min_margin\n";
  for (auto *os : {&curves, &stability, &lemma})
    os->precision(10);

  bool all_passed = true;
  for (auto problem : problems) {
    auto const [k_lo, k_hi] = parse_levels(
        o.levels.empty() ? (problem == AAOMG_POISSON ? "2:3" : "1:2")
                         : o.levels);
    auto const smoothers = parse_smoothers(
        o.smoothers.empty()
            ? (problem == AAOMG_POISSON ? "normal,lsgs,slsgs,cgs"
                                        : "normal,lsgs,slsgs,vanka")
            : o.smoothers,
        problem);
    int const k_min = problem == AAOMG_STOKES ? std::max(1, k_lo) : k_lo;
    for (auto const &a : alphas) {
      auto h = make_hierarchy(problem, k_min, k_hi, a.value);
      for (int k = k_min; k <= k_hi; ++k) {
        aaomg_stability st;
        check(aaomg_stability_constants(h.get(), k, &st), "stability");
        aaomg_lemma1 lm;
        check(aaomg_lemma1_check(h.get(), k, o.nu_max, &lm), "lemma1");
        stability << problem_name(problem) << ',' << k << ',' << a.value << ','
                  << st.lower << ',' << st.upper << ','
                  << 1.0 + lm.inverse_inequality_delta << '\n';
        lemma << problem_name(problem) << ',' << k << ',' << a.value << ','
              << lm.passed << ',' << lm.first_violation << ',' << lm.c_bar
              << ',' << lm.nnz << ',' << lm.inverse_inequality_delta << ','
              << lm.min_margin << '\n';
        all_passed = all_passed && lm.passed;

        std::vector<double> eta(static_cast<std::size_t>(o.nu_max));
        std::vector<double> bound(eta.size());
        for (auto sm : smoothers) {
          aaomg_solve_options def;
          check(aaomg_solve_options_default(sm, problem, &def), "options");
          check(aaomg_smoothing_curve(h.get(), k, sm, def.damping, o.nu_max,
                                      eta.data(), bound.data(), nullptr),
                "smoothing curve");
          for (int nu = 1; nu <= o.nu_max; ++nu)
            curves << problem_name(problem) << ',' << k << ',' << a.value
                   << ',' << aaomg_smoother_name(sm) << ',' << nu << ','
                   << eta[static_cast<std::size_t>(nu - 1)] << ','
                   << bound[static_cast<std::size_t>(nu - 1)] << '\n';
        }
        std::printf("%-7s k=%d alpha=%-6s c=[%.4f, %.4f] lemma1 %s "
                    "(min margin %.1f)\n",
                    problem_name(problem), k, a.label.c_str(), st.lower,
                    st.upper, lm.passed ? "ok" : "FAILED", lm.min_margin);
      }
    }
  }
  return all_passed ? exit_ok : exit_check_failed;
}

// --------------------------------------------------------------- export

struct ExportOptions
{
  std::string problem = "poisson";
  int level = 2;
  double alpha = 1.0;
  std::string matrix;
  std::string mesh;
};

int run_export(ExportOptions const &o)
{
  auto const problem = parse_problem(o.problem);
  if (o.matrix.empty() && o.mesh.empty())
    throw UsageError("nothing to export (use --matrix and/or --mesh)");
  auto h = make_hierarchy(problem, o.level, o.level, o.alpha);
  if (!o.matrix.empty())
    check(aaomg_write_matrix(h.get(), o.level, o.matrix.c_str()), "matrix");
  if (!o.mesh.empty())
    check(aaomg_write_mesh(h.get(), o.level, o.mesh.c_str()), "mesh");
  return exit_ok;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"All-at-once multigrid for Poisson and Stokes control"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(aaomg_version()));

  TableOptions table;
  auto *t = app.add_subcommand("table", "iteration counts over levels, "
                                        "smoothers and alpha");
  t->add_option("--problem", table.problem, "poisson|stokes")
      ->capture_default_str();
  t->add_option("--smoother", table.smoothers,
                "comma list of normal,lsgs,slsgs,cgs,vanka");
  t->add_option("--levels", table.levels, "finest levels, e.g. 5:8");
  t->add_option("--alpha", table.alphas, "comma list")->capture_default_str();
  t->add_option("--cycle", table.cycle, "v|w")->capture_default_str();
  t->add_option("--nu", table.nu, "pre,post sweeps (default 2,2; 1,1 slsgs)");
  t->add_option("--tau", table.tau, "damping for normal and vanka");
  t->add_option("--tol", table.tol, "relative reduction")->capture_default_str();
  t->add_option("--seed", table.seed, "initial guess seed");
  t->add_option("--format", table.format, "markdown|csv|json")
      ->capture_default_str();
  t->add_option("--max-iter", table.max_iter)->capture_default_str();
  t->add_option("--coarsest", table.coarsest, "coarsest level")
      ->capture_default_str();

  AnalysisOptions analysis;
  auto *an = app.add_subcommand("analysis", "dense stability and smoothing "
                                            "checks, written as CSV");
  an->add_option("--problem", analysis.problem, "poisson|stokes|both")
      ->capture_default_str();
  an->add_option("--levels", analysis.levels,
                 "levels (default 2:3 Poisson, 1:2 Stokes)");
  an->add_option("--alpha", analysis.alphas, "comma list")
      ->capture_default_str();
  an->add_option("--smoother", analysis.smoothers, "curves to compute");
  an->add_option("--nu-max", analysis.nu_max)->capture_default_str();
  an->add_option("--out", analysis.out_dir, "output directory")
      ->capture_default_str();

  ExportOptions exp;
  auto *ex = app.add_subcommand("export", "write the system matrix "
                                          "(MatrixMarket) and the mesh");
  ex->add_option("--problem", exp.problem)->capture_default_str();
  ex->add_option("--level", exp.level)->capture_default_str();
  ex->add_option("--alpha", exp.alpha)->capture_default_str();
  ex->add_option("--matrix", exp.matrix, "output path");
  ex->add_option("--mesh", exp.mesh, "output path");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const &e) {
    int const code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }
  table.seed_set = t->count("--seed") > 0;

  try {
    if (*t)
      return run_table(table);
    if (*an)
      return run_analysis(analysis);
    return run_export(exp);
  } catch (UsageError const &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (std::exception const &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
}
