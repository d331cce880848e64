#pragma once

#include "heatbem/analysis.hpp"
#include "heatbem/galerkin.hpp"
#include "heatbem/krylov.hpp"
#include "heatbem/reference.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace heatbem {

enum class ExampleKind {
  Example1,  // u0 = sin(2 pi x), uniform refinement study
  Example2,  // u0 = 5 exp(-10x) sin(pi x), adaptive refinement study
  Series,    // u0 = sum_n b_n sin(n pi x) with user-given b_n
};

enum class KappaSelection { SingularValues, Eigenvalues, Both };

/// Preset alpha per problem: 1 for Example1 and custom series, 20 for Example2
/// (the value that reproduces its reference error column).
double default_alpha(ExampleKind kind);

struct ExperimentConfig {
  ExampleKind example = ExampleKind::Example1;
  std::vector<double> series;  // b_1, b_2, ... for ExampleKind::Series
  /// Unset: default_alpha(example).
  std::optional<double> alpha;
  double horizon = 1.0;
  int max_level = 8;
  double tol = 1e-8;
  int max_iter = 5000;
  std::vector<PreconditionerKind> preconditioners{
      PreconditionerKind::Identity, PreconditionerKind::Diagonal, PreconditionerKind::Calderon};
  double theta = 0.5;
  /// Adaptive study: stop after the first step whose N exceeds this (0: no limit).
  int max_elements = 0;
  KappaSelection kappa = KappaSelection::Both;
  /// Condition numbers and ellipticity margins are skipped above this N.
  int max_kappa_n = 1024;
  int gauss_order = 8;
  std::string out_dir;  // empty: no files written
  bool dump_matrices = false;

  double effective_alpha() const;
  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

Problem make_problem(const ExperimentConfig& cfg);
SineSeries make_reference(const ExperimentConfig& cfg);

/// One row of a convergence/conditioning table.
struct StudyRecord {
  int level = 0;
  int n = 0;
  double l2_error = 0.0;
  std::optional<double> eoc;
  std::optional<double> kappa_v_sv, kappa_v_eig;
  std::optional<double> kappa_diag_sv, kappa_diag_eig;
  std::optional<double> kappa_calderon_sv, kappa_calderon_eig;
  std::optional<int> iters_none, iters_diag, iters_calderon;
  std::optional<double> margin_v, margin_d;
  double quasi_uniformity = 1.0;
};

struct Study {
  std::vector<StudyRecord> records;
  std::vector<BoundaryMesh> meshes;
  std::vector<std::string> notes;
};

using Progress = std::function<void(const StudyRecord&)>;

/// Everything computed on one mesh.
struct LevelSolution {
  OperatorMatrices operators;
  Vector rhs;
  Vector flux;  // from the first configured GMRES run, else a direct solve
  StudyRecord record;
};

LevelSolution solve_level(const BoundaryMesh& mesh, const Problem& prob,
                          const SineSeries& reference, const ExperimentConfig& cfg);

/// Uniform refinement L = 0..max_level (at most 11).
Study run_uniform_study(const ExperimentConfig& cfg, const Progress& progress = {});

/// solve -> indicator -> mark -> refine, starting from N = 2. The indicator of
/// element l is the L2(sigma_l) norm of w_{h/2} - w_h, w_{h/2} solved on the
/// uniformly bisected mesh.
Study run_adaptive_study(const ExperimentConfig& cfg, const Progress& progress = {});

/// Per-element indicators of the two-level hierarchical estimate.
std::vector<double> hierarchical_indicators(const BoundaryMesh& mesh, const Vector& coarse,
                                            const Vector& fine);

struct InteriorSample {
  double x = 0.0, t = 0.0;
  double u_h = 0.0;
  std::optional<double> u_ref;
};

struct SingleSolve {
  BoundaryMesh mesh;
  LevelSolution solution;
  std::vector<InteriorSample> samples;
};

/// Uniform mesh of the given level, solve, and evaluate the representation
/// formula at the given (x, t) points. Points outside the cylinder throw ConfigError.
SingleSolve run_single_solve(const ExperimentConfig& cfg, int level,
                             const std::vector<std::pair<double, double>>& points);

/// Writes mesh_L<level>.txt, flux_L<level>.csv, interior.csv and meta.txt into cfg.out_dir.
void write_single_solve_files(const ExperimentConfig& cfg, const SingleSolve& result,
                              std::string_view command);

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Structural and ellipticity checks on uniform meshes L = 0..max_level.
std::vector<InvariantCheck> check_invariants(const ExperimentConfig& cfg);

/// "# key=value" lines describing the run.
std::vector<std::string> metadata(const ExperimentConfig& cfg, std::string_view command);

/// Comma-separated, header row, 17 significant digits, metadata as leading '#' lines.
void write_csv(std::ostream& out, const std::vector<StudyRecord>& records,
               const std::vector<std::string>& meta);

/// Aligned markdown table, one row per record.
void write_markdown(std::ostream& out, const std::vector<StudyRecord>& records, bool adaptive);

/// Writes tableN.csv, tableN.md, mesh_L*.txt and meta.txt into cfg.out_dir.
void write_study_files(const ExperimentConfig& cfg, const Study& study, std::string_view command,
                       int table_number);

} // namespace heatbem
