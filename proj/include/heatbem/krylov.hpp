#pragma once

#include "heatbem/types.hpp"

#include <functional>
#include <memory>
#include <string_view>
#include <vector>

namespace heatbem {

/// out = A * in
using LinearOperator = std::function<void(const Vector& in, Vector& out)>;

enum class PreconditionerKind { Identity, Diagonal, Calderon };

std::string_view to_string(PreconditionerKind kind);

/// Approximate inverse P^{-1} of a system matrix.
class Preconditioner {
public:
  static Preconditioner identity();
  /// P = diag(A); every diagonal entry must be positive.
  static Preconditioner diagonal(const Matrix& a);
  /// P^{-1} = M^{-1} D M^{-T} for a diagonal mass matrix M (given by its diagonal).
  static Preconditioner calderon(const Vector& mass, std::shared_ptr<const Matrix> hypersingular);

  PreconditionerKind kind() const { return kind_; }
  Eigen::Index size() const;

  /// Returns P^{-1} r.
  Vector apply(const Vector& r) const;

  /// P^{-1} A, formed explicitly (for condition numbers).
  Matrix apply_to(const Matrix& a) const;

private:
  PreconditionerKind kind_ = PreconditionerKind::Identity;
  Vector scaling_;  // inverse diagonal or inverse mass
  std::shared_ptr<const Matrix> hypersingular_;
};

struct SolveReport {
  Vector solution;
  int iterations = 0;
  /// ||b - A x_k|| / ||b|| for k = 0, 1, ...; from the Arnoldi least-squares problem.
  std::vector<double> relative_residual_history;
  /// Recomputed ||b - A x|| / ||b|| for the returned solution.
  double true_relative_residual = 0.0;
  bool converged = false;
  bool breakdown = false;
};

struct GmresOptions {
  double tol = 1e-8;
  int max_iter = 1000;
};

/// Full (non-restarted) GMRES with right preconditioning and zero initial guess:
/// solves A P^{-1} y = b, x = P^{-1} y, and stops once the true relative
/// residual ||b - A x|| / ||b|| <= tol. Arnoldi uses modified Gram-Schmidt with
/// one reorthogonalization pass.
SolveReport gmres(const LinearOperator& a, const Vector& b, const Preconditioner& p,
                  const GmresOptions& options = {});
SolveReport gmres(const Matrix& a, const Vector& b, const Preconditioner& p,
                  const GmresOptions& options = {});

/// Dense LU with partial pivoting. Throws NumericalError for a pivot that is
/// negligible relative to the largest entry.
Vector direct_solve(const Matrix& a, const Vector& b);

} // namespace heatbem
