// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include "heatbem/study.hpp"
#include "oracle.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace heatbem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Reference columns of the uniform refinement study, Example 1.
constexpr std::array<double, 7> kUniformError{0.658, 0.324, 0.160, 0.079, 0.040, 0.020, 0.010};  // L = 2..8
constexpr std::array<double, 5> kUniformKappaV{2.808, 4.905, 7.548, 11.140, 16.724};  // L = 1..5
constexpr std::array<double, 5> kUniformKappaC{1.422, 1.486, 1.541, 1.563, 1.590};    // L = 2..6
// Reference start error of the adaptive study, Example 2, N = 2.
constexpr double kAdaptiveStartError = 1.886;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [violated: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, Outcome& o) {
  std::cout << (o.passed ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << " |"
            << o.detail.str() << std::endl;
  failures += o.passed ? 0 : 1;
}

double rel(double value, double target) { return std::abs(value - target) / std::abs(target); }

struct TimedStudy {
  Study study;
  std::vector<double> elapsed;  // cumulative seconds after each record
};

TimedStudy timed_uniform(const ExperimentConfig& cfg) {
  TimedStudy t;
  const auto start = Clock::now();
  t.study = run_uniform_study(cfg, [&](const StudyRecord&) { t.elapsed.push_back(seconds_since(start)); });
  return t;
}

ExperimentConfig uniform_config(double alpha, int max_level, bool with_kappa) {
  ExperimentConfig cfg;
  cfg.example = ExampleKind::Example1;
  cfg.alpha = alpha;
  cfg.max_level = max_level;
  cfg.tol = 1e-8;
  cfg.preconditioners = {PreconditionerKind::Identity, PreconditionerKind::Calderon};
  cfg.kappa = KappaSelection::Both;
  cfg.max_kappa_n = with_kappa ? 1024 : 0;
  return cfg;
}

void check_error_column(const Study& s, Outcome& o) {
  for (int level = 2; level <= 8; ++level) {
    const auto& r = s.records[static_cast<std::size_t>(level)];
    const double target = kUniformError[static_cast<std::size_t>(level - 2)];
    o.detail << " L" << level << "=" << r.l2_error;
    o.require(rel(r.l2_error, target) <= 0.05,
              "L=" + std::to_string(level) + " error within 5% of " + std::to_string(target));
  }
  for (int level = 4; level <= 8; ++level) {
    const auto& r = s.records[static_cast<std::size_t>(level)];
    o.require(r.eoc && std::abs(*r.eoc - 1.0) <= 0.05, "eoc at L=" + std::to_string(level) + " in 1 +- 0.05");
  }
  o.detail << " eoc(L8)=" << s.records[8].eoc.value_or(NAN);
}

// Least-squares slope of -log2(error) against the level.
double observed_order(const std::vector<double>& errors, int first_level) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double x = first_level + static_cast<double>(i), y = -std::log2(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

int main() {
  std::cout.precision(4);
  std::cout << "acceptance suite (tolerances fixed in tests/acceptance.cpp)\n";

  // Example 1, uniform refinement at the prescribed alpha = 1, L = 0..9.
  const TimedStudy t1 = timed_uniform(uniform_config(1.0, 9, true));
  const auto& rec1 = t1.study.records;

  {
    Outcome o;
    o.detail << " alpha=1";
    check_error_column(t1.study, o);
    o.detail << " time(L<=8)=" << t1.elapsed[8] << "s";
    o.require(t1.elapsed[8] < 60.0, "runtime through L=8 below 1 minute");
    report(1, "uniform study error column and eoc", o);

    const TimedStudy t20 = timed_uniform(uniform_config(20.0, 8, false));
    Outcome d;
    check_error_column(t20.study, d);
    std::cout << "INFO  criterion 1 diagnostic (not counted): same check at alpha=20 "
              << (d.passed ? "passes" : "fails") << " |" << d.detail.str() << std::endl;
  }

  {
    Outcome o;
    bool kappa_v_ok = false;
    for (auto conv : {KappaConvention::SingularValues, KappaConvention::Eigenvalues}) {
      bool ok = true;
      o.detail << " kappa(V) " << to_string(conv) << ":";
      for (int level = 1; level <= 5; ++level) {
        const auto& r = rec1[static_cast<std::size_t>(level)];
        const double k = *(conv == KappaConvention::SingularValues ? r.kappa_v_sv : r.kappa_v_eig);
        o.detail << ' ' << k;
        ok = ok && rel(k, kUniformKappaV[static_cast<std::size_t>(level - 1)]) <= 0.15;
      }
      if (ok) {
        kappa_v_ok = true;
        o.detail << " (matches)";
      }
    }
    o.require(kappa_v_ok, "kappa(V_h) within 15% for L=1..5 under one convention");

    bool kappa_c_ok = false;
    for (auto conv : {KappaConvention::SingularValues, KappaConvention::Eigenvalues}) {
      bool bounded = true, close = true;
      o.detail << " kappa(C^-1 V) " << to_string(conv) << ":";
      for (int level = 0; level <= 9; ++level) {
        const auto& r = rec1[static_cast<std::size_t>(level)];
        const double k = *(conv == KappaConvention::SingularValues ? r.kappa_calderon_sv
                                                                   : r.kappa_calderon_eig);
        o.detail << ' ' << k;
        bounded = bounded && k <= 1.8;
        if (level >= 2 && level <= 6)
          close = close && rel(k, kUniformKappaC[static_cast<std::size_t>(level - 2)]) <= 0.10;
      }
      if (bounded && close) {
        kappa_c_ok = true;
        o.detail << " (matches)";
      } else if (bounded) {
        o.detail << " (<=1.8 but not within 10% for L=2..6)";
      }
    }
    o.require(kappa_c_ok, "kappa(C_V^-1 V_h) <= 1.8 for L<=9 and within 10% for L=2..6 under one convention");
    o.detail << " time(L<=9)=" << t1.elapsed[9] << "s";
    o.require(t1.elapsed[9] < 120.0, "runtime through L=9 below 2 minutes");
    report(2, "uniform study condition numbers", o);
  }

  {
    Outcome o;
    o.detail << " none:";
    for (const auto& r : rec1)
      o.detail << ' ' << *r.iters_none;
    o.detail << " calderon:";
    for (const auto& r : rec1)
      o.detail << ' ' << *r.iters_calderon;
    for (int level = 4; level <= 9; ++level)
      o.require(*rec1[static_cast<std::size_t>(level)].iters_none > *rec1[static_cast<std::size_t>(level - 1)].iters_none,
                "unpreconditioned count strictly increasing at L=" + std::to_string(level));
    o.require(*rec1[7].iters_none >= 50, "unpreconditioned count >= 50 at L=7");
    for (int level = 4; level <= 9; ++level) {
      const int it = *rec1[static_cast<std::size_t>(level)].iters_calderon;
      o.require(it <= 15, "Calderon count <= 15 at L=" + std::to_string(level));
      if (level > 4)
        o.require(it <= *rec1[static_cast<std::size_t>(level - 1)].iters_calderon + 1,
                  "Calderon count non-increasing within 1 at L=" + std::to_string(level));
    }
    o.require(*rec1[9].iters_calderon <= *rec1[4].iters_calderon + 1, "Calderon count at L=9 not above L=4");
    report(3, "uniform study iteration counts", o);
  }

  // Example 2, adaptive refinement (preset alpha) until N first exceeds 250.
  ExperimentConfig cfg2;
  cfg2.example = ExampleKind::Example2;
  cfg2.max_level = 60;
  cfg2.max_elements = 250;
  cfg2.kappa = KappaSelection::SingularValues;
  const Study s2 = run_adaptive_study(cfg2);
  {
    Outcome o;
    const auto& r = s2.records;
    o.detail << " alpha=" << cfg2.effective_alpha() << " start=" << r.front().l2_error;
    o.require(rel(r.front().l2_error, kAdaptiveStartError) <= 0.10, "start error within 10% of 1.886");
    for (std::size_t i = 1; i < r.size(); ++i)
      o.require(r[i].l2_error < r[i - 1].l2_error, "error decreases at step " + std::to_string(i));
    const auto last = std::find_if(r.begin(), r.end(), [](const StudyRecord& x) { return x.n > 250; });
    o.require(last != r.end(), "reached N > 250");
    if (last != r.end()) {
      o.detail << " step=" << last->level << " N=" << last->n << " error=" << last->l2_error
               << " kappa(V)=" << *last->kappa_v_sv << " kappa(diag)=" << *last->kappa_diag_sv
               << " kappa(C^-1 V)=" << *last->kappa_calderon_sv << " it(calderon)=" << *last->iters_calderon;
      o.require(*last->kappa_v_sv >= 1e3, "kappa(V_h) >= 1e3");
      o.require(*last->kappa_calderon_sv <= 2.5, "kappa(C_V^-1 V_h) <= 2.5");
      o.require(*last->iters_calderon <= 15, "Calderon iterations <= 15");
      o.require(*last->kappa_calderon_sv < *last->kappa_diag_sv && *last->kappa_diag_sv < *last->kappa_v_sv,
                "diagonal preconditioning in between");
    }
    report(4, "adaptive study properties", o);
  }

  {
    const auto start = Clock::now();
    Outcome o;
    std::mt19937 rng(2024);
    const std::vector<std::pair<BoundaryMesh, double>> meshes{
        {uniform_mesh(1.0, 2), 1.0},
        {uniform_mesh(1.0, 4), 1.0},
        {BoundaryMesh(1.0, {0.0, 0.05, 0.1, 0.4, 0.45, 1.0}, {0.0, 0.3, 0.7, 0.72, 1.0}), 1.0},
        {s2.meshes[std::min<std::size_t>(8, s2.meshes.size() - 1)], 20.0},
        {uniform_mesh(2.0, 3, {0.0, 2.0}), 20.0},
    };
    double worst = 0.0, worst_separated = 0.0;
    int sampled = 0, nonzero = 0;
    for (const auto& [m, alpha] : meshes) {
      const OperatorMatrices ops = assemble_operators(m, {alpha});
      std::uniform_int_distribution<int> pick(0, m.size() - 1);
      for (int i = 0; i < 20; ++i) {
        const int l = pick(rng), k = pick(rng);
        const bool separated = m.element(l).t_begin >= m.element(k).t_end;
        const double err = std::max({std::abs(ops.V(l, k) - oracle::single_layer(m, l, k, alpha)),
                                     std::abs(ops.K(l, k) - oracle::double_layer(m, l, k, alpha)),
                                     std::abs(ops.D(l, k) - oracle::hypersingular(m, l, k, alpha))});
        (separated ? worst_separated : worst) = std::max(separated ? worst_separated : worst, err);
        ++sampled;
        nonzero += ops.V(l, k) != 0.0 ? 1 : 0;
      }
    }
    o.detail << " pairs=" << sampled << " (x3 operators, " << nonzero << " causal) max|diff| adjacent=" << worst
             << " separated=" << worst_separated << " time=" << seconds_since(start) << "s";
    o.require(sampled == 100, "100 sampled entries");
    o.require(worst <= 1e-8, "non-separated entries within 1e-8");
    o.require(worst_separated <= 1e-10, "separated entries within 1e-10");
    report(5, "Galerkin entries vs nested adaptive quadrature", o);
  }

  {
    Outcome o;
    double min_v = INFINITY, min_d = INFINITY;
    int meshes = 0;
    for (const Study* s : {&t1.study, &s2})
      for (const auto& r : s->records) {
        o.require(r.margin_v.has_value() && r.margin_d.has_value(), "margin computed for N=" + std::to_string(r.n));
        if (r.margin_v && r.margin_d) {
          min_v = std::min(min_v, *r.margin_v);
          min_d = std::min(min_d, *r.margin_d);
          ++meshes;
        }
      }
    o.detail << " meshes=" << meshes << " min lambda(sym V)=" << min_v << " min lambda(sym D)=" << min_d;
    o.require(min_v > 0.0, "sym(V_h) positive definite");
    o.require(min_d > 0.0, "sym(D_h) positive definite");
    report(6, "ellipticity of V_h and D_h", o);
  }

  {
    Outcome o;
    ExperimentConfig cfg = uniform_config(1.0, 8, false);
    cfg.preconditioners = {PreconditionerKind::Calderon};
    const std::vector<std::pair<double, double>> points{{0.25, 0.1}, {0.5, 0.3}};
    std::vector<std::vector<double>> errors(points.size());
    for (int level = 3; level <= 8; ++level) {
      const SingleSolve r = run_single_solve(cfg, level, points);
      for (std::size_t p = 0; p < points.size(); ++p)
        errors[p].push_back(std::abs(r.samples[p].u_h - *r.samples[p].u_ref));
    }
    // Errors at roundoff level carry no rate information; a point whose
    // errors all stay below this floor has converged at every level.
    constexpr double kFloor = 1e-10;
    for (std::size_t p = 0; p < points.size(); ++p) {
      const auto& e = errors[p];
      o.detail << " (" << points[p].first << "," << points[p].second << "): err L3=" << e.front()
               << " L7=" << e[4] << " L8=" << e.back();
      o.require(e[4] <= 1e-2, "error at L=7 <= 1e-2");
      if (*std::max_element(e.begin(), e.end()) <= kFloor) {
        o.detail << " (at roundoff floor)";
        continue;
      }
      const double order = observed_order(e, 3);
      o.detail << " order=" << order;
      o.require(order >= 1.0, "observed order >= 1");
    }
    report(7, "interior representation formula", o);
  }

  {
    Outcome o;
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> ud(0.05, 1.0), ut(0.01, 2.0), ua(0.5, 25.0), us(0.0, 1.0);
    double closed_form = 0.0, tau_consistency = 0.0, heat_identity = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double d = (us(rng) < 0.5 ? -1.0 : 1.0) * ud(rng), tau = ut(rng), alpha = ua(rng);
      const KernelParams p{alpha};
      const double i0 = oracle::integrate([&](double s) { return oracle::heat_kernel(d, s, alpha); },
                                          0.0, tau, 1e-15);
      const double j0 = oracle::integrate(
          [&](double s) { return (tau - s) * oracle::heat_kernel(d, s, alpha); }, 0.0, tau, 1e-15);
      closed_form = std::max({closed_form, std::abs(primitive_I0(d, tau, p) - i0),
                              std::abs(primitive_J0(d, tau, p) - j0)});

      // U varies on the scales sqrt(tau / alpha) / (1 + z) in d and tau / (1 + z^2)
      // in tau, z^2 = alpha d^2 / (4 tau); the difference steps follow them.
      // Relative errors are taken against alpha U (1 + z^2) / tau, the size of
      // the second derivative, which stays away from zero at its sign change.
      const double z2 = alpha * d * d / (4.0 * tau);
      const double u = oracle::heat_kernel(d, tau, alpha);
      const double ht = 1e-4 * tau / (1.0 + z2);
      const double di0 = (primitive_I0(d, tau + ht, p) - primitive_I0(d, tau - ht, p)) / (2 * ht);
      const double dj0 = (primitive_J0(d, tau + ht, p) - primitive_J0(d, tau - ht, p)) / (2 * ht);
      tau_consistency = std::max({tau_consistency, std::abs(di0 - u) / u,
                                  std::abs(dj0 - primitive_I0(d, tau, p)) / primitive_I0(d, tau, p)});

      const double hd = 1e-4 * std::sqrt(tau / alpha) / (1.0 + std::sqrt(z2));
      const auto U = [&](double dd, double tt) { return fundamental_solution({dd, tt}, p); };
      const double u_dd = (U(d + hd, tau) - 2 * U(d, tau) + U(d - hd, tau)) / (hd * hd);
      const double u_t = (U(d, tau + ht) - U(d, tau - ht)) / (2 * ht);
      const double scale = alpha * u * (1.0 + z2) / tau;
      heat_identity = std::max({heat_identity, std::abs(u_dd - alpha * u_t) / scale,
                                std::abs(u_dd - alpha * kernel_dt({d, tau}, p)) / scale});
    }
    o.detail << " max|closed-oracle|=" << closed_form << " tau-consistency=" << tau_consistency
             << " heat identity=" << heat_identity;
    o.require(closed_form <= 1e-10, "I0/J0 within 1e-10 of the oracle");
    o.require(tau_consistency <= 1e-6, "d/dtau I0 = U and d/dtau J0 = I0 to 1e-6");
    o.require(heat_identity <= 1e-6, "d2U/dd2 = alpha dU/dtau to 1e-6");
    report(8, "kernel primitives", o);
  }

  {
    Outcome o;
    const Problem prob = example1_problem(1.0);
    double previous = INFINITY;
    for (int level = 3; level <= 7; ++level) {
      const BoundaryMesh m = uniform_mesh(1.0, level);
      const Vector w = direct_solve(assemble_V(m, prob.kernel()), assemble_rhs(m, prob));
      const double r = mass_weighted_norm(second_bie_residual(prob, {m, w}), assemble_mass(m));
      o.detail << " L" << level << "=" << r;
      o.require(r < previous, "residual decreases at L=" + std::to_string(level));
      previous = r;
    }
    report(9, "second boundary integral equation residual", o);
  }

  std::cout << (9 - failures) << "/9 criteria passed" << std::endl;
  return failures;
}
