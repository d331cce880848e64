#include "heatbem/galerkin.hpp"

#include "heatbem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace heatbem {

namespace {

struct ElementData {
  double x, normal, t0, t1;
};

std::vector<ElementData> element_data(const BoundaryMesh& mesh) {
  std::vector<ElementData> out;
  out.reserve(static_cast<std::size_t>(mesh.size()));
  for (const auto& e : mesh.elements())
    out.push_back({mesh.position(e.side), e.normal(), e.t_begin, e.t_end});
  return out;
}

// F(t2 - s1) - F(t1 - s1) - F(t2 - s2) + F(t1 - s2) for a double primitive F
// over sigma_l x sigma_k, sigma_l = (t1, t2) and sigma_k = (s1, s2).
template <class F>
double corner_sum(F&& prim, const ElementData& test, const ElementData& trial) {
  return prim(test.t1 - trial.t0) - prim(test.t0 - trial.t0) - prim(test.t1 - trial.t1) +
         prim(test.t0 - trial.t1);
}

template <class Entry>
Matrix assemble_dense(const std::vector<ElementData>& el, Entry&& entry) {
  const int n = static_cast<int>(el.size());
  Matrix m = Matrix::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (int l = 0; l < n; ++l) {
    const auto& test = el[static_cast<std::size_t>(l)];
    for (int k = 0; k < n; ++k) {
      const auto& trial = el[static_cast<std::size_t>(k)];
      // causality: a test element entirely before the trial element sees nothing
      if (test.t1 <= trial.t0)
        continue;
      m(l, k) = entry(test, trial);
    }
  }
  return m;
}

// Repeats a graded quadrature with finer grading and higher order until two
// successive values agree to rel_tol (relative to max(|value|, 1e-2)).
template <class Eval>
double stabilized(Eval&& eval, const QuadratureConfig& quad, const char* what, int element) {
  double width_scale = 1e-3;
  double previous = eval(quad.order, width_scale);
  for (int r = 0; r <= quad.max_refinements; ++r) {
    width_scale *= 0.1;
    const double current = eval(quad.order + 8 * (r + 1), width_scale);
    if (std::abs(current - previous) <= quad.rel_tol * std::max(std::abs(current), 1e-2))
      return current;
    previous = current;
  }
  throw NumericalError(std::string(what) + ": quadrature did not converge on element " +
                       std::to_string(element));
}

// int_a^b kernel(x_l - y) u0(y) dy with panels graded toward y = x_l.
template <class Kernel>
double initial_moment(const Problem& prob, double x_l, double scale, const Kernel& kernel,
                      const QuadratureConfig& quad, const char* what, int element) {
  const double length = prob.b - prob.a;
  const auto eval = [&](int order, double width_scale) {
    const auto breaks = graded_breaks(prob.a, prob.b, x_l, quad.grading_ratio,
                                      width_scale * std::min(scale, length));
    return composite_gauss([&](double y) { return kernel(x_l - y) * prob.initial(y); },
                           breaks, order);
  };
  return stabilized(eval, quad, what, element);
}

void require_matching_geometry(const BoundaryMesh& mesh, const Problem& prob) {
  prob.validate();
  if (!(mesh.interval() == prob.interval()))
    throw ConfigError("mesh interval does not match the problem interval");
  if (mesh.horizon() != prob.horizon)
    throw ConfigError("mesh horizon does not match the problem horizon");
}

double element_integral(const std::function<double(double)>& f, double t0, double t1,
                        int order) {
  return composite_gauss(f, {t0, t1}, order);
}

} // namespace

void Problem::validate() const {
  kernel().validate();
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw ConfigError("spatial interval requires a < b");
  if (!std::isfinite(horizon) || horizon <= 0.0)
    throw ConfigError("time horizon T must be positive");
}

double compatibility_defect(const Problem& prob) {
  const auto u0 = [&](double x) { return prob.initial ? prob.initial(x) : 0.0; };
  const auto g = [&](Side s) { return prob.dirichlet ? prob.dirichlet(s, 0.0) : 0.0; };
  return std::max(std::abs(u0(prob.a) - g(Side::Left)), std::abs(u0(prob.b) - g(Side::Right)));
}

Problem example1_problem(double alpha, double horizon) {
  Problem p;
  p.alpha = alpha;
  p.horizon = horizon;
  p.initial = [](double x) { return std::sin(2.0 * std::numbers::pi * x); };
  return p;
}

Problem example2_problem(double alpha, double horizon) {
  Problem p;
  p.alpha = alpha;
  p.horizon = horizon;
  p.initial = [](double x) { return 5.0 * std::exp(-10.0 * x) * std::sin(std::numbers::pi * x); };
  return p;
}

Matrix assemble_V(const BoundaryMesh& mesh, const KernelParams& p) {
  p.validate();
  return assemble_dense(element_data(mesh), [&](const ElementData& l, const ElementData& k) {
    const double d = l.x - k.x;
    return corner_sum([&](double tau) { return primitive_J0(d, tau, p); }, l, k) / p.alpha;
  });
}

Matrix assemble_K(const BoundaryMesh& mesh, const KernelParams& p) {
  p.validate();
  return assemble_dense(element_data(mesh), [&](const ElementData& l, const ElementData& k) {
    const double d = l.x - k.x;
    if (d == 0.0)
      return 0.0;
    // dU/dn_y = -n_k dU/dd
    return -k.normal / p.alpha *
           corner_sum([&](double tau) { return primitive_J0_dd(d, tau, p); }, l, k);
  });
}

Matrix assemble_K_adjoint(const BoundaryMesh& mesh, const KernelParams& p) {
  p.validate();
  return assemble_dense(element_data(mesh), [&](const ElementData& l, const ElementData& k) {
    const double d = l.x - k.x;
    if (d == 0.0)
      return 0.0;
    return l.normal / p.alpha *
           corner_sum([&](double tau) { return primitive_J0_dd(d, tau, p); }, l, k);
  });
}

Matrix assemble_D(const BoundaryMesh& mesh, const KernelParams& p) {
  p.validate();
  return assemble_dense(element_data(mesh), [&](const ElementData& l, const ElementData& k) {
    const double d = l.x - k.x;
    return l.normal * k.normal *
           corner_sum([&](double tau) { return primitive_I0(d, tau, p); }, l, k);
  });
}

Vector assemble_mass(const BoundaryMesh& mesh) {
  Vector m(mesh.size());
  for (const auto& e : mesh.elements())
    m(e.index) = e.size();
  return m;
}

OperatorMatrices assemble_operators(const BoundaryMesh& mesh, const KernelParams& p) {
  return {assemble_V(mesh, p), assemble_K(mesh, p), assemble_D(mesh, p), assemble_mass(mesh)};
}

Vector assemble_initial_moments(const BoundaryMesh& mesh, const Problem& prob,
                                const QuadratureConfig& quad) {
  require_matching_geometry(mesh, prob);
  Vector f = Vector::Zero(mesh.size());
  if (!prob.initial)
    return f;
  const KernelParams p = prob.kernel();
  const auto el = element_data(mesh);
  for (int l = 0; l < mesh.size(); ++l) {
    const auto& e = el[static_cast<std::size_t>(l)];
    const double scale = std::sqrt((e.t0 > 0.0 ? e.t0 : e.t1) / p.alpha);
    f(l) = initial_moment(
        prob, e.x, scale,
        [&](double d) { return primitive_I0(d, e.t1, p) - primitive_I0(d, e.t0, p); }, quad,
        "initial potential", l);
  }
  return f;
}

Vector assemble_initial_flux_moments(const BoundaryMesh& mesh, const Problem& prob,
                                     const QuadratureConfig& quad) {
  require_matching_geometry(mesh, prob);
  Vector f = Vector::Zero(mesh.size());
  if (!prob.initial)
    return f;
  const KernelParams p = prob.kernel();
  const auto el = element_data(mesh);
  for (int l = 0; l < mesh.size(); ++l) {
    const auto& e = el[static_cast<std::size_t>(l)];
    const double scale = std::sqrt((e.t0 > 0.0 ? e.t0 : e.t1) / p.alpha);
    f(l) = e.normal *
           initial_moment(
               prob, e.x, scale,
               [&](double d) { return primitive_I0_dd(d, e.t1, p) - primitive_I0_dd(d, e.t0, p); },
               quad, "initial flux potential", l);
  }
  return f;
}

Vector assemble_dirichlet_moments(const BoundaryMesh& mesh, const Problem& prob,
                                  const QuadratureConfig& quad) {
  require_matching_geometry(mesh, prob);
  Vector f = Vector::Zero(mesh.size());
  if (!prob.dirichlet)
    return f;
  const KernelParams p = prob.kernel();
  const auto el = element_data(mesh);
  const int n = mesh.size();
  for (int l = 0; l < n; ++l) {
    const auto& test = el[static_cast<std::size_t>(l)];
    const Side side_l = mesh.element(l).side;
    double value = 0.5 * element_integral([&](double t) { return prob.dirichlet(side_l, t); },
                                          test.t0, test.t1, quad.order);
    for (int k = 0; k < n; ++k) {
      const auto& trial = el[static_cast<std::size_t>(k)];
      const double d = test.x - trial.x;
      if (d == 0.0 || trial.t0 >= test.t1)
        continue;
      const Side side_k = mesh.element(k).side;
      // int_{t1}^{t2} (1/alpha) dU/dn_y(d, t - s) dt = -(n_k/alpha) [dI0/dd(d, t2 - s) - dI0/dd(d, t1 - s)]
      const auto integrand = [&](double s) {
        return prob.dirichlet(side_k, s) * (-trial.normal / p.alpha) *
               (primitive_I0_dd(d, test.t1 - s, p) - primitive_I0_dd(d, test.t0 - s, p));
      };
      std::vector<double> breaks{trial.t0};
      if (test.t0 > trial.t0 && test.t0 < trial.t1)
        breaks.push_back(test.t0);
      breaks.push_back(std::min(trial.t1, test.t1));
      value += composite_gauss(integrand, breaks, quad.order);
    }
    f(l) = value;
  }
  return f;
}

Vector assemble_rhs(const BoundaryMesh& mesh, const Problem& prob, const QuadratureConfig& quad) {
  return assemble_dirichlet_moments(mesh, prob, quad) - assemble_initial_moments(mesh, prob, quad);
}

Vector project_dirichlet(const BoundaryMesh& mesh, const Problem& prob,
                         const QuadratureConfig& quad) {
  Vector g = Vector::Zero(mesh.size());
  if (!prob.dirichlet)
    return g;
  for (const auto& e : mesh.elements())
    g(e.index) = element_integral([&](double t) { return prob.dirichlet(e.side, t); },
                                  e.t_begin, e.t_end, quad.order) /
                 e.size();
  return g;
}

double evaluate_interior(double x, double t, const DiscreteFlux& w, const Problem& prob,
                         const QuadratureConfig& quad) {
  require_matching_geometry(w.mesh, prob);
  if (!(x > prob.a && x < prob.b))
    throw ConfigError("interior evaluation requires a < x < b");
  if (!(t > 0.0 && t <= prob.horizon))
    throw ConfigError("interior evaluation requires 0 < t <= T");
  if (w.coefficients.size() != w.mesh.size())
    throw ConfigError("flux coefficient count does not match the mesh");
  const KernelParams p = prob.kernel();

  double u = 0.0;
  if (prob.initial) {
    const double scale = std::sqrt(t / p.alpha);
    const auto kernel = [&](double y) {
      return fundamental_solution({x - y, t}, p) * prob.initial(y);
    };
    const auto eval = [&](int order, double width_scale) {
      const double min_width = width_scale * std::min(scale, prob.b - prob.a);
      return composite_gauss(kernel, graded_breaks(prob.a, x, x, quad.grading_ratio, min_width),
                             order) +
             composite_gauss(kernel, graded_breaks(x, prob.b, x, quad.grading_ratio, min_width),
                             order);
    };
    u += stabilized(eval, quad, "interior initial potential", -1);
  }

  const auto el = element_data(w.mesh);
  for (int k = 0; k < w.mesh.size(); ++k) {
    const auto& e = el[static_cast<std::size_t>(k)];
    if (e.t0 >= t)
      continue;
    const double d = x - e.x;
    u += w.coefficients(k) / p.alpha * (primitive_I0(d, t - e.t0, p) - primitive_I0(d, t - e.t1, p));
    if (prob.dirichlet) {
      const Side side = w.mesh.element(k).side;
      const double upper = std::min(e.t1, t);
      // -(1/alpha) dU/dn_y = (n_k/alpha) dU/dd
      const auto integrand = [&](double s) {
        return e.normal / p.alpha * kernel_dd({d, t - s}, p) * prob.dirichlet(side, s);
      };
      const auto breaks = upper == t ? graded_breaks(e.t0, upper, upper, quad.grading_ratio,
                                                     1e-6 * (upper - e.t0))
                                     : std::vector<double>{e.t0, upper};
      u += composite_gauss(integrand, breaks, quad.order);
    }
  }
  return u;
}

Vector second_bie_residual(const Problem& prob, const DiscreteFlux& w,
                           const QuadratureConfig& quad) {
  const BoundaryMesh& mesh = w.mesh;
  require_matching_geometry(mesh, prob);
  const KernelParams p = prob.kernel();
  const Vector mass = assemble_mass(mesh);
  Vector r = 0.5 * mass.cwiseProduct(w.coefficients) -
             assemble_K_adjoint(mesh, p) * w.coefficients -
             assemble_initial_flux_moments(mesh, prob, quad);
  if (prob.dirichlet)
    r -= assemble_D(mesh, p) * project_dirichlet(mesh, prob, quad);
  return r;
}

double mass_weighted_norm(const Vector& r, const Vector& mass) {
  return std::sqrt((r.array().square() / mass.array()).sum());
}

void write_matrix(std::ostream& out, const Matrix& m) {
  const auto old = out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
  out.precision(old);
}

void write_vector(std::ostream& out, const Vector& v) {
  const auto old = out.precision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out << v(i) << '\n';
  out.precision(old);
}

} // namespace heatbem
