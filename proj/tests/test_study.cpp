#include "heatbem/study.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace heatbem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.max_level = 4;
  return cfg;
}

int count_data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#')
      ++rows;
  return rows - 1;  // header
}

} // namespace

TEST_CASE("default alpha per example") {
  ExperimentConfig cfg;
  CHECK(cfg.effective_alpha() == 1.0);
  cfg.example = ExampleKind::Example2;
  CHECK(cfg.effective_alpha() == 20.0);
  cfg.alpha = 3.0;
  CHECK(cfg.effective_alpha() == 3.0);
}

TEST_CASE("configuration validation") {
  ExperimentConfig cfg;
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.theta = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.example = ExampleKind::Series;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.alpha = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.max_level = 12;
  CHECK_THROWS_AS(run_uniform_study(cfg), ConfigError);
}

TEST_CASE("uniform study is deterministic and well formed") {
  const ExperimentConfig cfg = small_config();
  const Study a = run_uniform_study(cfg);
  const Study b = run_uniform_study(cfg);
  REQUIRE(a.records.size() == 5);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].l2_error == b.records[i].l2_error);
    CHECK(a.records[i].iters_calderon == b.records[i].iters_calderon);
    CHECK(a.records[i].n == (2 << i));
    CHECK(a.records[i].margin_v.value() > 0.0);
    CHECK(a.records[i].margin_d.value() > 0.0);
  }
  CHECK_FALSE(a.records[0].eoc.has_value());
  CHECK(a.records[4].eoc.has_value());

  std::ostringstream csv, csv_again;
  write_csv(csv, a.records, metadata(cfg, "test"));
  write_csv(csv_again, b.records, metadata(cfg, "test"));
  CHECK(csv.str() == csv_again.str());
  CHECK(count_data_rows(csv.str()) == 5);
  CHECK(csv.str().find("# alpha=1") != std::string::npos);
  std::ostringstream md;
  write_markdown(md, a.records, false);
  CHECK(md.str().find("kappa(C_V^-1 V_h)") != std::string::npos);
}

TEST_CASE("custom series matches the built-in example") {
  ExperimentConfig series = small_config();
  series.example = ExampleKind::Series;
  series.series = {0.0, 1.0};
  series.max_level = 2;
  ExperimentConfig builtin = small_config();
  builtin.max_level = 2;
  const Study a = run_uniform_study(series);
  const Study b = run_uniform_study(builtin);
  for (std::size_t i = 0; i < a.records.size(); ++i)
    CHECK(a.records[i].l2_error == doctest::Approx(b.records[i].l2_error).epsilon(1e-9));
}

TEST_CASE("hierarchical indicators vanish for identical fluxes") {
  const BoundaryMesh m = uniform_mesh(1.0, 1);
  Vector coarse(4);
  coarse << 1.0, 2.0, 3.0, 4.0;
  Vector fine(8);
  fine << 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 4.0;
  for (double eta : hierarchical_indicators(m, coarse, fine))
    CHECK(eta == 0.0);
  fine(7) = 5.0;  // child of element 3
  const auto eta = hierarchical_indicators(m, coarse, fine);
  CHECK(eta[2] == 0.0);
  CHECK(eta[3] == doctest::Approx(std::sqrt(0.25)));
  CHECK_THROWS_AS(hierarchical_indicators(m, coarse, coarse), ConfigError);
}

TEST_CASE("adaptive study refines and reduces the error") {
  ExperimentConfig cfg;
  cfg.example = ExampleKind::Example2;
  cfg.max_level = 6;
  const Study s = run_adaptive_study(cfg);
  REQUIRE(s.records.size() == 7);
  for (std::size_t i = 1; i < s.records.size(); ++i) {
    CHECK(s.records[i].n > s.records[i - 1].n);
    CHECK(s.records[i].l2_error < s.records[i - 1].l2_error);
  }
  CHECK(s.records[0].l2_error == doctest::Approx(1.8865).epsilon(1e-3));
}

TEST_CASE("single solve with interior samples") {
  ExperimentConfig cfg = small_config();
  const SingleSolve r = run_single_solve(cfg, 3, {{0.25, 0.1}});
  REQUIRE(r.samples.size() == 1);
  CHECK(r.samples[0].u_ref.has_value());
  CHECK(std::abs(r.samples[0].u_h - *r.samples[0].u_ref) < 0.05);
  CHECK_THROWS_AS(run_single_solve(cfg, 3, {{1.5, 0.1}}), ConfigError);
}

TEST_CASE("zero data gives zero flux and zero interior values") {
  ExperimentConfig cfg;
  cfg.example = ExampleKind::Series;
  cfg.series = {0.0};
  const SingleSolve r = run_single_solve(cfg, 2, {{0.5, 0.5}});
  CHECK(r.solution.flux.norm() == 0.0);
  CHECK(r.samples[0].u_h == 0.0);
}

TEST_CASE("single solve files") {
  ExperimentConfig cfg;
  const auto dir = std::filesystem::temp_directory_path() / "heatbem_single_solve";
  std::filesystem::remove_all(dir);
  cfg.out_dir = dir.string();
  write_single_solve_files(cfg, run_single_solve(cfg, 1, {{0.25, 0.1}}), "test");
  for (const char* f : {"mesh_L1.txt", "flux_L1.csv", "interior.csv", "meta.txt"})
    CHECK(std::filesystem::exists(dir / f));
  std::ifstream in(dir / "flux_L1.csv");
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    ++rows;
  CHECK(rows == 5);
  std::filesystem::remove_all(dir);
}

TEST_CASE("invariant checks pass") {
  ExperimentConfig cfg = small_config();
  cfg.max_level = 3;
  for (const auto& c : check_invariants(cfg)) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
}

TEST_CASE("study files") {
  ExperimentConfig cfg = small_config();
  cfg.max_level = 1;
  cfg.dump_matrices = true;
  const auto dir = std::filesystem::temp_directory_path() / "heatbem_study_files";
  std::filesystem::remove_all(dir);
  cfg.out_dir = dir.string();
  write_study_files(cfg, run_uniform_study(cfg), "test", 1);
  for (const char* f : {"table1.csv", "table1.md", "meta.txt", "mesh_L0.txt", "mesh_L1.txt", "V_L1.txt"})
    CHECK(std::filesystem::exists(dir / f));
  std::filesystem::remove_all(dir);
}
