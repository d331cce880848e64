#pragma once

#include "heatbem/kernels.hpp"
#include "heatbem/mesh.hpp"
#include "heatbem/types.hpp"

#include <functional>
#include <iosfwd>

namespace heatbem {

/// Dirichlet problem  alpha u_t - u_xx = 0  in (a,b) x (0,T),  u = g on the
/// lateral boundary,  u(., 0) = u0.
struct Problem {
  double alpha = 1.0;
  double a = 0.0;
  double b = 1.0;
  double horizon = 1.0;
  /// g(side, t); empty means g = 0.
  std::function<double(Side, double)> dirichlet;
  /// u0(x); empty means u0 = 0.
  std::function<double(double)> initial;

  KernelParams kernel() const { return {alpha}; }
  double position(Side s) const { return s == Side::Left ? a : b; }
  Interval interval() const { return {a, b}; }
  void validate() const;
};

/// max(|u0(a) - g(a,0)|, |u0(b) - g(b,0)|). The solver does not require it to vanish.
double compatibility_defect(const Problem& prob);

/// u0 = sin(2 pi x) on (0,1), g = 0.
Problem example1_problem(double alpha, double horizon = 1.0);
/// u0 = 5 exp(-10x) sin(pi x) on (0,1), g = 0.
Problem example2_problem(double alpha, double horizon = 1.0);

/// Production quadrature for data-dependent terms (RHS, interior evaluation).
struct QuadratureConfig {
  int order = 16;
  double grading_ratio = 0.15;
  double rel_tol = 1e-10;
  int max_refinements = 4;
};

/// Galerkin matrices for piecewise constants on a boundary mesh.
struct OperatorMatrices {
  Matrix V;     // single layer
  Matrix K;     // double layer
  Matrix D;     // hypersingular
  Vector mass;  // diagonal of M_h, equals the element sizes
};

/// V_h[l,k] = (1/alpha) int_{sigma_l} int_{sigma_k} U(x_l - x_k, t - s) ds dt,
/// exact via four-corner differences of J0.
Matrix assemble_V(const BoundaryMesh& mesh, const KernelParams& p);

/// Double layer with kernel (1/alpha) dU/dn_y; zero between elements on the same side.
Matrix assemble_K(const BoundaryMesh& mesh, const KernelParams& p);

/// Adjoint double layer with kernel (1/alpha) dU/dn_x (causal, like K).
Matrix assemble_K_adjoint(const BoundaryMesh& mesh, const KernelParams& p);

/// Hypersingular operator. Using d2U/dd2 = alpha dU/dtau the double time
/// integral collapses to n_l n_k int_{sigma_k} [U(d, t_l2 - s) - U(d, t_l1 - s)] ds.
Matrix assemble_D(const BoundaryMesh& mesh, const KernelParams& p);

/// Diagonal of M_h[l,k] = <phi_k, phi_l>_{L2}.
Vector assemble_mass(const BoundaryMesh& mesh);

OperatorMatrices assemble_operators(const BoundaryMesh& mesh, const KernelParams& p);

/// <M0 u0, phi_l>, computed as int_a^b [I0(x_l - y, t_l2) - I0(x_l - y, t_l1)] u0(y) dy.
Vector assemble_initial_moments(const BoundaryMesh& mesh, const Problem& prob,
                                const QuadratureConfig& quad = {});

/// <M1 u0, phi_l> with M1 u0 = d/dn_x of the initial potential.
Vector assemble_initial_flux_moments(const BoundaryMesh& mesh, const Problem& prob,
                                     const QuadratureConfig& quad = {});

/// <(1/2 I + K) g, phi_l>; the time integral over sigma_l is exact, the trial
/// integral uses Gauss quadrature on each element.
Vector assemble_dirichlet_moments(const BoundaryMesh& mesh, const Problem& prob,
                                  const QuadratureConfig& quad = {});

/// f = <(1/2 I + K) g, phi_l> - <M0 u0, phi_l>.
Vector assemble_rhs(const BoundaryMesh& mesh, const Problem& prob,
                    const QuadratureConfig& quad = {});

/// Element means of g.
Vector project_dirichlet(const BoundaryMesh& mesh, const Problem& prob,
                         const QuadratureConfig& quad = {});

/// Piecewise constant flux coefficients on a mesh.
struct DiscreteFlux {
  BoundaryMesh mesh;
  Vector coefficients;
};

/// Representation formula at an interior point a < x < b, 0 < t <= T.
/// Throws ConfigError for points outside the space-time cylinder.
double evaluate_interior(double x, double t, const DiscreteFlux& w, const Problem& prob,
                         const QuadratureConfig& quad = {});

/// Galerkin residual of the second boundary integral equation
///   r_l = <(1/2 I - K') w_h - M1 u0 - D g, phi_l>,
/// with g replaced by its element means in the D term.
Vector second_bie_residual(const Problem& prob, const DiscreteFlux& w,
                           const QuadratureConfig& quad = {});

/// sqrt(r^T M_h^{-1} r): the L2 norm of the Riesz representative of a Galerkin residual.
double mass_weighted_norm(const Vector& r, const Vector& mass);

/// Row-major dump, one row per line, 17 significant digits.
void write_matrix(std::ostream& out, const Matrix& m);
void write_vector(std::ostream& out, const Vector& v);

} // namespace heatbem
