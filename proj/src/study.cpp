#include "heatbem/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

namespace heatbem {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string format_fixed(std::optional<double> v, int digits) {
  if (!v)
    return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << *v;
  return os.str();
}

std::string format_int(std::optional<int> v) { return v ? std::to_string(*v) : "-"; }

template <class T>
std::string csv_field(const std::optional<T>& v) {
  if (!v)
    return "";
  if constexpr (std::is_same_v<T, double>)
    return format_double(*v);
  else
    return std::to_string(*v);
}

bool wants_sv(KappaSelection k) { return k != KappaSelection::Eigenvalues; }
bool wants_eig(KappaSelection k) { return k != KappaSelection::SingularValues; }

void dump_level(const ExperimentConfig& cfg, const std::string& tag, const LevelSolution& s) {
  if (!cfg.dump_matrices || cfg.out_dir.empty())
    return;
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  const auto dump_m = [&](const char* name, const Matrix& m) {
    std::ofstream f(dir / (std::string(name) + "_" + tag + ".txt"));
    write_matrix(f, m);
  };
  const auto dump_v = [&](const char* name, const Vector& v) {
    std::ofstream f(dir / (std::string(name) + "_" + tag + ".txt"));
    write_vector(f, v);
  };
  dump_m("V", s.operators.V);
  dump_m("K", s.operators.K);
  dump_m("D", s.operators.D);
  dump_v("M", s.operators.mass);
  dump_v("rhs", s.rhs);
  dump_v("flux", s.flux);
}

} // namespace

double default_alpha(ExampleKind kind) { return kind == ExampleKind::Example2 ? 20.0 : 1.0; }

double ExperimentConfig::effective_alpha() const { return alpha ? *alpha : default_alpha(example); }

void ExperimentConfig::validate() const {
  KernelParams{effective_alpha()}.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ConfigError("time horizon T must be positive");
  if (example == ExampleKind::Series && series.empty())
    throw ConfigError("a custom series needs at least one coefficient");
  if (max_level < 0)
    throw ConfigError("levels must be nonnegative");
  if (!(tol > 0.0 && tol < 1.0))
    throw ConfigError("tolerance must lie in (0, 1)");
  if (!(theta > 0.0 && theta <= 1.0))
    throw ConfigError("theta must lie in (0, 1]");
  if (max_iter < 1)
    throw ConfigError("max_iter must be positive");
  if (gauss_order < 1 || gauss_order > 64)
    throw ConfigError("Gauss order must lie in [1, 64]");
  if (max_kappa_n < 0 || max_elements < 0)
    throw ConfigError("size limits must be nonnegative");
}

Problem make_problem(const ExperimentConfig& cfg) {
  const double alpha = cfg.effective_alpha();
  switch (cfg.example) {
  case ExampleKind::Example1:
    return example1_problem(alpha, cfg.horizon);
  case ExampleKind::Example2:
    return example2_problem(alpha, cfg.horizon);
  case ExampleKind::Series:
    break;
  }
  Problem p;
  p.alpha = alpha;
  p.horizon = cfg.horizon;
  p.initial = [b = cfg.series](double x) {
    double u = 0.0;
    for (std::size_t n = 1; n <= b.size(); ++n)
      u += b[n - 1] * std::sin(static_cast<double>(n) * std::numbers::pi * x);
    return u;
  };
  return p;
}

SineSeries make_reference(const ExperimentConfig& cfg) {
  const double alpha = cfg.effective_alpha();
  switch (cfg.example) {
  case ExampleKind::Example1:
    return example1_series(alpha);
  case ExampleKind::Example2:
    return example2_series(alpha);
  case ExampleKind::Series:
    break;
  }
  return SineSeries(cfg.series, alpha);
}

LevelSolution solve_level(const BoundaryMesh& mesh, const Problem& prob,
                          const SineSeries& reference, const ExperimentConfig& cfg) {
  const KernelParams p = prob.kernel();
  LevelSolution s;
  s.operators = assemble_operators(mesh, p);
  s.rhs = assemble_rhs(mesh, prob);
  StudyRecord& rec = s.record;
  rec.level = mesh.level();
  rec.n = mesh.size();
  rec.quasi_uniformity = quasi_uniformity_constant(mesh);

  const auto hypersingular = std::make_shared<const Matrix>(s.operators.D);
  const GmresOptions options{cfg.tol, cfg.max_iter};
  bool have_flux = false;
  // Calderon first so the reported flux comes from the preconditioned solve when available
  std::vector<PreconditionerKind> order = cfg.preconditioners;
  std::stable_partition(order.begin(), order.end(),
                        [](PreconditionerKind k) { return k == PreconditionerKind::Calderon; });
  const bool with_kappa = mesh.size() <= cfg.max_kappa_n;
  for (PreconditionerKind kind : order) {
    const Preconditioner prec =
        kind == PreconditionerKind::Identity   ? Preconditioner::identity()
        : kind == PreconditionerKind::Diagonal ? Preconditioner::diagonal(s.operators.V)
                                               : Preconditioner::calderon(s.operators.mass, hypersingular);
    const SolveReport report = gmres(s.operators.V, s.rhs, prec, options);
    if (!report.converged)
      throw NumericalError("GMRES (" + std::string(to_string(kind)) + ") did not converge on " +
                           std::to_string(mesh.size()) + " elements");
    if (!have_flux) {
      s.flux = report.solution;
      have_flux = true;
    }
    std::optional<double> sv, eig;
    if (with_kappa) {
      const Matrix op = prec.apply_to(s.operators.V);
      if (wants_sv(cfg.kappa))
        sv = condition_number(op, KappaConvention::SingularValues);
      if (wants_eig(cfg.kappa))
        eig = condition_number(op, KappaConvention::Eigenvalues);
    }
    switch (kind) {
    case PreconditionerKind::Identity:
      rec.iters_none = report.iterations;
      rec.kappa_v_sv = sv;
      rec.kappa_v_eig = eig;
      break;
    case PreconditionerKind::Diagonal:
      rec.iters_diag = report.iterations;
      rec.kappa_diag_sv = sv;
      rec.kappa_diag_eig = eig;
      break;
    case PreconditionerKind::Calderon:
      rec.iters_calderon = report.iterations;
      rec.kappa_calderon_sv = sv;
      rec.kappa_calderon_eig = eig;
      break;
    }
  }
  if (!have_flux)
    s.flux = direct_solve(s.operators.V, s.rhs);
  if (with_kappa) {
    rec.margin_v = ellipticity_margin(s.operators.V);
    rec.margin_d = ellipticity_margin(s.operators.D);
  }
  rec.l2_error = l2_error(mesh, s.flux, reference, cfg.gauss_order);
  return s;
}

Study run_uniform_study(const ExperimentConfig& cfg, const Progress& progress) {
  cfg.validate();
  if (cfg.max_level > 11)
    throw ConfigError("uniform studies are limited to 11 levels (dense matrices)");
  const Problem prob = make_problem(cfg);
  const SineSeries reference = make_reference(cfg);
  Study study;
  for (int level = 0; level <= cfg.max_level; ++level) {
    const BoundaryMesh mesh = uniform_mesh(cfg.horizon, level, prob.interval());
    LevelSolution s;
    try {
      s = solve_level(mesh, prob, reference, cfg);
    } catch (const NumericalError& e) {
      throw NumericalError("level " + std::to_string(level) + ": " + e.what());
    }
    if (!study.records.empty()) {
      const double prev = study.records.back().l2_error;
      if (prev > 0.0 && s.record.l2_error > 0.0)
        s.record.eoc = std::log2(prev / s.record.l2_error);
    }
    dump_level(cfg, "L" + std::to_string(level), s);
    study.records.push_back(s.record);
    study.meshes.push_back(mesh);
    if (progress)
      progress(study.records.back());
  }
  return study;
}

std::vector<double> hierarchical_indicators(const BoundaryMesh& mesh, const Vector& coarse,
                                            const Vector& fine) {
  if (coarse.size() != mesh.size() || fine.size() != 2 * mesh.size())
    throw ConfigError("hierarchical indicators need coarse and bisected coefficients");
  std::vector<double> eta(static_cast<std::size_t>(mesh.size()));
  // refine_uniform keeps the side-blocked order, so element i has children 2i and 2i+1
  for (const auto& e : mesh.elements()) {
    const int i = e.index;
    const double half = 0.5 * e.size();
    const double d0 = fine(2 * i) - coarse(i);
    const double d1 = fine(2 * i + 1) - coarse(i);
    eta[static_cast<std::size_t>(i)] = std::sqrt(half * (d0 * d0 + d1 * d1));
  }
  return eta;
}

Study run_adaptive_study(const ExperimentConfig& cfg, const Progress& progress) {
  cfg.validate();
  const Problem prob = make_problem(cfg);
  const SineSeries reference = make_reference(cfg);
  const KernelParams p = prob.kernel();
  Study study;
  BoundaryMesh mesh = uniform_mesh(cfg.horizon, 0, prob.interval());
  for (int step = 0; step <= cfg.max_level; ++step) {
    LevelSolution s;
    try {
      s = solve_level(mesh, prob, reference, cfg);
    } catch (const NumericalError& e) {
      throw NumericalError("adaptive step " + std::to_string(step) + ": " + e.what());
    }
    s.record.level = step;
    dump_level(cfg, "L" + std::to_string(step), s);
    study.records.push_back(s.record);
    study.meshes.push_back(mesh);
    if (progress)
      progress(study.records.back());

    const std::size_t k = study.records.size();
    if (k >= 4 && study.records[k - 1].l2_error >= study.records[k - 4].l2_error)
      study.notes.push_back("stagnation: error did not decrease over the 3 steps up to step " +
                            std::to_string(step));
    if (step == cfg.max_level || (cfg.max_elements > 0 && mesh.size() > cfg.max_elements))
      break;

    const BoundaryMesh fine = refine_uniform(mesh);
    const Vector fine_flux = direct_solve(assemble_V(fine, p), assemble_rhs(fine, prob));
    const auto eta = hierarchical_indicators(mesh, s.flux, fine_flux);
    BoundaryMesh next = refine_adaptive(mesh, eta, cfg.theta);
    mesh = BoundaryMesh(next.horizon(), next.nodes(Side::Left), next.nodes(Side::Right), step + 1,
                        next.interval());
  }
  return study;
}

SingleSolve run_single_solve(const ExperimentConfig& cfg, int level,
                             const std::vector<std::pair<double, double>>& points) {
  cfg.validate();
  const Problem prob = make_problem(cfg);
  for (const auto& [x, t] : points)
    if (!(x > prob.a && x < prob.b && t > 0.0 && t <= prob.horizon))
      throw ConfigError("point (" + format_double(x) + ", " + format_double(t) +
                        ") lies outside the space-time cylinder");
  const SineSeries reference = make_reference(cfg);
  SingleSolve out{uniform_mesh(cfg.horizon, level, prob.interval()), {}, {}};
  out.solution = solve_level(out.mesh, prob, reference, cfg);
  dump_level(cfg, "L" + std::to_string(level), out.solution);
  const DiscreteFlux w{out.mesh, out.solution.flux};
  for (const auto& [x, t] : points)
    out.samples.push_back({x, t, evaluate_interior(x, t, w, prob), reference.interior(x, t)});
  return out;
}

void write_single_solve_files(const ExperimentConfig& cfg, const SingleSolve& result,
                              std::string_view command) {
  if (cfg.out_dir.empty())
    return;
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  const std::string tag = "L" + std::to_string(result.mesh.level());
  {
    std::ofstream f(dir / ("mesh_" + tag + ".txt"));
    write_mesh(f, result.mesh);
  }
  {
    std::ofstream f(dir / ("flux_" + tag + ".csv"));
    f << "side,t_begin,t_end,w\n";
    for (const auto& e : result.mesh.elements())
      f << side_tag(e.side) << ',' << format_double(e.t_begin) << ',' << format_double(e.t_end) << ','
        << format_double(result.solution.flux(e.index)) << '\n';
  }
  {
    std::ofstream f(dir / "interior.csv");
    f << "x,t,u_h,u_ref,abs_error\n";
    for (const auto& s : result.samples) {
      f << format_double(s.x) << ',' << format_double(s.t) << ',' << format_double(s.u_h) << ',';
      if (s.u_ref)
        f << format_double(*s.u_ref) << ',' << format_double(std::abs(s.u_h - *s.u_ref));
      else
        f << ',';
      f << '\n';
    }
  }
  std::ofstream f(dir / "meta.txt");
  for (const auto& line : metadata(cfg, command))
    f << line << '\n';
}

std::vector<InvariantCheck> check_invariants(const ExperimentConfig& cfg) {
  cfg.validate();
  const Problem prob = make_problem(cfg);
  const KernelParams p = prob.kernel();
  std::vector<InvariantCheck> checks;
  const auto add = [&](std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  };
  for (int level = 0; level <= cfg.max_level; ++level) {
    const BoundaryMesh mesh = uniform_mesh(cfg.horizon, level, prob.interval());
    const std::string tag = " L=" + std::to_string(level);
    const int n = mesh.size();

    double total = 0.0;
    for (const auto& e : mesh.elements())
      total += e.size();
    add("partition" + tag, std::abs(total - 2.0 * cfg.horizon) <= 1e-12 * cfg.horizon,
        "sum h = " + format_double(total));
    add("quasi-uniformity" + tag, quasi_uniformity_constant(mesh) == 1.0,
        "c_L = " + format_double(quasi_uniformity_constant(mesh)));

    const OperatorMatrices ops = assemble_operators(mesh, p);
    bool causal = true, same_side = true;
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k) {
        const auto& el = mesh.element(l);
        const auto& ek = mesh.element(k);
        if (el.t_end <= ek.t_begin &&
            (ops.V(l, k) != 0.0 || ops.K(l, k) != 0.0 || ops.D(l, k) != 0.0))
          causal = false;
        if (el.side == ek.side && ops.K(l, k) != 0.0)
          same_side = false;
      }
    add("causality" + tag, causal, "V, K, D vanish when the test element precedes the trial element");
    add("K same-side zero" + tag, same_side, "double layer vanishes within a side");

    const int half = n / 2;
    Eigen::PermutationMatrix<Eigen::Dynamic> swap(n);
    for (int i = 0; i < n; ++i)
      swap.indices()(i) = (i + half) % n;
    const double asym = (swap * ops.V * swap.transpose() - ops.V).cwiseAbs().maxCoeff();
    add("side symmetry" + tag, asym <= 1e-14 * ops.V.cwiseAbs().maxCoeff(),
        "max |P V P^T - V| = " + format_double(asym));

    if (n <= cfg.max_kappa_n) {
      const double mv = ellipticity_margin(ops.V);
      const double md = ellipticity_margin(ops.D);
      add("V ellipticity" + tag, mv > 0.0, "lambda_min(sym V) = " + format_double(mv));
      add("D ellipticity" + tag, md > 0.0, "lambda_min(sym D) = " + format_double(md));
    }
  }
  return checks;
}

std::vector<std::string> metadata(const ExperimentConfig& cfg, std::string_view command) {
  std::vector<std::string> m;
  const auto example = cfg.example == ExampleKind::Example1   ? "1"
                       : cfg.example == ExampleKind::Example2 ? "2"
                                                              : "series";
  m.push_back("command=" + std::string(command));
  m.push_back(std::string("example=") + example);
  m.push_back("alpha=" + format_double(cfg.effective_alpha()));
  m.push_back(std::string("alpha_source=") +
              (cfg.alpha ? "user" : "preset"));
  m.push_back("interval=(0,1)");
  m.push_back("T=" + format_double(cfg.horizon));
  m.push_back("levels=" + std::to_string(cfg.max_level));
  m.push_back("tol=" + format_double(cfg.tol));
  std::string precs;
  for (auto k : cfg.preconditioners)
    precs += (precs.empty() ? "" : ",") + std::string(to_string(k));
  m.push_back("preconditioners=" + precs);
  m.push_back("theta=" + format_double(cfg.theta));
  m.push_back(std::string("kappa=") +
              (cfg.kappa == KappaSelection::Both ? "both"
               : cfg.kappa == KappaSelection::SingularValues ? "sv"
                                                             : "eig"));
  m.push_back("max_kappa_n=" + std::to_string(cfg.max_kappa_n));
  m.push_back("residual_convention=true relative residual ||b-Ax||/||b||, right preconditioning, x0=0");
  m.push_back("gmres=full memory, modified Gram-Schmidt with reorthogonalization");
  m.push_back("indicator=L2 norm of w_{h/2} - w_h per element, maximum marking");
  return m;
}

void write_csv(std::ostream& out, const std::vector<StudyRecord>& records,
               const std::vector<std::string>& meta) {
  for (const auto& line : meta)
    out << "# " << line << '\n';
  out << "L,N,l2_error,eoc,kappa_V_sv,kappa_V_eig,iters_none,kappa_diag_sv,kappa_diag_eig,"
         "iters_diag,kappa_calderon_sv,kappa_calderon_eig,iters_calderon,margin_V,margin_D,c_L\n";
  for (const auto& r : records) {
    out << r.level << ',' << r.n << ',' << format_double(r.l2_error) << ',' << csv_field(r.eoc)
        << ',' << csv_field(r.kappa_v_sv) << ',' << csv_field(r.kappa_v_eig) << ','
        << csv_field(r.iters_none) << ',' << csv_field(r.kappa_diag_sv) << ','
        << csv_field(r.kappa_diag_eig) << ',' << csv_field(r.iters_diag) << ','
        << csv_field(r.kappa_calderon_sv) << ',' << csv_field(r.kappa_calderon_eig) << ','
        << csv_field(r.iters_calderon) << ',' << csv_field(r.margin_v) << ','
        << csv_field(r.margin_d) << ',' << format_double(r.quasi_uniformity) << '\n';
  }
}

void write_markdown(std::ostream& out, const std::vector<StudyRecord>& records, bool adaptive) {
  std::vector<std::vector<std::string>> rows;
  const auto kappa = [](const std::optional<double>& sv, const std::optional<double>& eig) {
    if (sv && eig)
      return format_fixed(sv, 3) + " / " + format_fixed(eig, 3);
    return sv ? format_fixed(sv, 3) : format_fixed(eig, 3);
  };
  if (adaptive)
    rows.push_back({"L", "N", "||w - w_h||_L2(Sigma)", "kappa(V_h)", "It.", "kappa(diag(V_h)^-1 V_h)",
                    "It.", "kappa(C_V^-1 V_h)", "It."});
  else
    rows.push_back({"L", "N", "||w - w_h||_L2(Sigma)", "eoc", "kappa(V_h)", "It.",
                    "kappa(C_V^-1 V_h)", "It."});
  for (const auto& r : records) {
    if (adaptive)
      rows.push_back({std::to_string(r.level), std::to_string(r.n), format_fixed(r.l2_error, 3),
                      kappa(r.kappa_v_sv, r.kappa_v_eig), format_int(r.iters_none),
                      kappa(r.kappa_diag_sv, r.kappa_diag_eig), format_int(r.iters_diag),
                      kappa(r.kappa_calderon_sv, r.kappa_calderon_eig), format_int(r.iters_calderon)});
    else
      rows.push_back({std::to_string(r.level), std::to_string(r.n), format_fixed(r.l2_error, 3),
                      format_fixed(r.eoc, 3), kappa(r.kappa_v_sv, r.kappa_v_eig),
                      format_int(r.iters_none), kappa(r.kappa_calderon_sv, r.kappa_calderon_eig),
                      format_int(r.iters_calderon)});
  }
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  const auto emit = [&](const std::vector<std::string>& row) {
    out << '|';
    for (std::size_t c = 0; c < row.size(); ++c)
      out << ' ' << std::setw(static_cast<int>(width[c])) << row[c] << " |";
    out << '\n';
  };
  emit(rows.front());
  out << '|';
  for (std::size_t c = 0; c < width.size(); ++c)
    out << std::string(width[c] + 1, '-') << ":|";
  out << '\n';
  for (std::size_t i = 1; i < rows.size(); ++i)
    emit(rows[i]);
}

void write_study_files(const ExperimentConfig& cfg, const Study& study, std::string_view command,
                       int table_number) {
  if (cfg.out_dir.empty())
    return;
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  const auto meta = metadata(cfg, command);
  const std::string stem = "table" + std::to_string(table_number);
  {
    std::ofstream f(dir / (stem + ".csv"));
    write_csv(f, study.records, meta);
  }
  {
    std::ofstream f(dir / (stem + ".md"));
    write_markdown(f, study.records, table_number == 2);
  }
  for (std::size_t i = 0; i < study.meshes.size(); ++i) {
    std::ofstream f(dir / ("mesh_L" + std::to_string(study.records[i].level) + ".txt"));
    write_mesh(f, study.meshes[i]);
  }
  std::ofstream f(dir / "meta.txt");
  for (const auto& line : meta)
    f << line << '\n';
  for (const auto& note : study.notes)
    f << "note=" << note << '\n';
}

} // namespace heatbem
