// Command line driver for the space-time boundary element solver.
#include "heatbem/study.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace heatbem;

struct Options {
  int example = 1;
  std::vector<double> series;
  std::optional<double> alpha;
  double horizon = 1.0;
  int levels = 8;
  double tol = 1e-8;
  int max_iter = 5000;
  std::string precond = "all";
  double theta = 0.5;
  int max_elements = 0;
  std::string kappa = "both";
  int max_kappa_n = 1024;
  std::string out;
  bool dump = false;
  bool quiet = false;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--example", o.example, "Built-in example (1 or 2)")->check(CLI::IsMember({1, 2}));
  app->add_option("--series", o.series,
                  "Sine coefficients b_1 b_2 ... of u0 (replaces --example)");
  app->add_option("--alpha", o.alpha, "Coefficient of du/dt (default: 1, or 20 for example 2)")
      ->check(CLI::PositiveNumber);
  app->add_option("--horizon,-T", o.horizon, "Final time T")->check(CLI::PositiveNumber);
  app->add_option("--levels", o.levels, "Finest level, or number of adaptive steps")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--tol", o.tol, "GMRES relative residual tolerance")->check(CLI::Range(1e-16, 0.5));
  app->add_option("--max-iter", o.max_iter, "GMRES iteration cap")->check(CLI::PositiveNumber);
  app->add_option("--precond", o.precond, "Preconditioner")
      ->check(CLI::IsMember({"none", "diag", "calderon", "all"}));
  app->add_option("--kappa", o.kappa, "Condition number convention")
      ->check(CLI::IsMember({"sv", "eig", "both"}));
  app->add_option("--max-kappa-n", o.max_kappa_n, "Skip condition numbers above this N")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--out", o.out, "Output directory");
  app->add_flag("--dump-matrices", o.dump, "Write V, K, D, M, rhs and flux per level into --out");
  app->add_flag("--quiet,-q", o.quiet, "Only print the final table");
  app->set_config("--config", "", "Read key=value options from a file; flags override it");
}

ExperimentConfig to_config(const Options& o) {
  ExperimentConfig cfg;
  if (!o.series.empty()) {
    cfg.example = ExampleKind::Series;
    cfg.series = o.series;
  } else {
    cfg.example = o.example == 1 ? ExampleKind::Example1 : ExampleKind::Example2;
  }
  cfg.alpha = o.alpha;
  cfg.horizon = o.horizon;
  cfg.max_level = o.levels;
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  if (o.precond == "none")
    cfg.preconditioners = {PreconditionerKind::Identity};
  else if (o.precond == "diag")
    cfg.preconditioners = {PreconditionerKind::Diagonal};
  else if (o.precond == "calderon")
    cfg.preconditioners = {PreconditionerKind::Calderon};
  cfg.theta = o.theta;
  cfg.max_elements = o.max_elements;
  cfg.kappa = o.kappa == "sv"    ? KappaSelection::SingularValues
              : o.kappa == "eig" ? KappaSelection::Eigenvalues
                                 : KappaSelection::Both;
  cfg.max_kappa_n = o.max_kappa_n;
  cfg.out_dir = o.out;
  cfg.dump_matrices = o.dump;
  cfg.validate();
  return cfg;
}

Progress progress_printer(const Options& o) {
  if (o.quiet)
    return {};
  return [](const StudyRecord& r) {
    std::cerr << "L=" << r.level << " N=" << r.n << " error=" << std::setprecision(6) << r.l2_error
              << '\n';
  };
}

int run_study(const Options& o, bool adaptive, const std::string& command) {
  const ExperimentConfig cfg = to_config(o);
  const Study study = adaptive ? run_adaptive_study(cfg, progress_printer(o))
                               : run_uniform_study(cfg, progress_printer(o));
  write_markdown(std::cout, study.records, adaptive);
  for (const auto& note : study.notes)
    std::cout << "note: " << note << '\n';
  write_study_files(cfg, study, command, adaptive ? 2 : 1);
  return 0;
}

std::vector<std::pair<double, double>> parse_points(const std::vector<std::string>& raw) {
  std::vector<std::pair<double, double>> points;
  for (const auto& s : raw) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
      throw ConfigError("point '" + s + "' is not of the form x,t");
    try {
      std::size_t used = 0;
      const double x = std::stod(s.substr(0, comma), &used);
      const std::string ts = s.substr(comma + 1);
      std::size_t used_t = 0;
      const double t = std::stod(ts, &used_t);
      if (used != comma || used_t != ts.size())
        throw std::invalid_argument(s);
      points.emplace_back(x, t);
    } catch (const std::logic_error&) {
      throw ConfigError("point '" + s + "' is not of the form x,t");
    }
  }
  return points;
}

int run_solve(const Options& o, int level, const std::vector<std::string>& raw_points,
              const std::string& command) {
  const ExperimentConfig cfg = to_config(o);
  const SingleSolve result = run_single_solve(cfg, level, parse_points(raw_points));
  write_single_solve_files(cfg, result, command);
  const StudyRecord& r = result.solution.record;
  std::cout << std::setprecision(10);
  std::cout << "N = " << r.n << "\nL2 flux error = " << r.l2_error << '\n';
  if (r.iters_none)
    std::cout << "iterations (none) = " << *r.iters_none << '\n';
  if (r.iters_diag)
    std::cout << "iterations (diag) = " << *r.iters_diag << '\n';
  if (r.iters_calderon)
    std::cout << "iterations (calderon) = " << *r.iters_calderon << '\n';
  for (const auto& e : result.mesh.elements())
    std::cout << side_tag(e.side) << ' ' << e.t_begin << ' ' << e.t_end << ' '
              << result.solution.flux(e.index) << '\n';
  for (const auto& s : result.samples) {
    std::cout << "u(" << s.x << ", " << s.t << ") = " << s.u_h;
    if (s.u_ref)
      std::cout << "  reference " << *s.u_ref << "  error " << std::abs(s.u_h - *s.u_ref);
    std::cout << '\n';
  }
  return 0;
}

int run_check(const Options& o) {
  const ExperimentConfig cfg = to_config(o);
  int failed = 0;
  for (const auto& c : check_invariants(cfg)) {
    std::cout << (c.passed ? "ok   " : "FAIL ") << c.name << "  (" << c.detail << ")\n";
    failed += c.passed ? 0 : 1;
  }
  std::cout << failed << " failed\n";
  return failed == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time Galerkin boundary elements for the 1D heat equation"};
  app.require_subcommand(1);
  Options o;
  add_common(&app, o);
  auto* example = app.get_option("--example");
  auto* levels = app.get_option("--levels");
  app.add_option("--theta", o.theta, "Adaptive marking parameter")->check(CLI::Range(0.0, 1.0));
  app.add_option("--max-elements", o.max_elements, "Adaptive study: stop once N exceeds this")
      ->check(CLI::NonNegativeNumber);
  int level = 4;
  std::vector<std::string> points;
  app.add_option("--level", level, "solve: uniform mesh level")->check(CLI::Range(0, 11));
  app.add_option("--point", points, "solve: interior point x,t (repeatable)");

  auto* cu = app.add_subcommand("study-uniform", "Uniform refinement study (writes table1.*)");
  auto* ca = app.add_subcommand("study-adaptive", "Adaptive refinement study (writes table2.*)");
  auto* cs = app.add_subcommand("solve", "Single solve with interior evaluation");
  auto* ci = app.add_subcommand("check-invariants", "Structural checks on uniform meshes");
  for (auto* sub : {cu, ca, cs, ci})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*ca && example->count() == 0)
    o.example = 2;
  if (*ci && levels->count() == 0)
    o.levels = 4;

  try {
    std::ostringstream command;
    for (int i = 0; i < argc; ++i)
      command << (i ? " " : "") << argv[i];
    if (*cu)
      return run_study(o, false, command.str());
    if (*ca)
      return run_study(o, true, command.str());
    if (*cs)
      return run_solve(o, level, points, command.str());
    return run_check(o);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
}
