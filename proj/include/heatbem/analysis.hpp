#pragma once

#include "heatbem/mesh.hpp"
#include "heatbem/reference.hpp"
#include "heatbem/types.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace heatbem {

/// How a condition number of a (possibly nonsymmetric) matrix is measured.
enum class KappaConvention {
  SingularValues,  // sigma_max / sigma_min
  Eigenvalues,     // max |lambda| / min |lambda|
};

std::string_view to_string(KappaConvention c);

/// Throws NumericalError when the matrix is singular to working precision
/// (smallest value below 1e-14 times the largest).
double condition_number(const Matrix& a, KappaConvention convention = KappaConvention::SingularValues);

/// Smallest eigenvalue of (A + A^T) / 2.
double ellipticity_margin(const Matrix& a);

/// ||w_ref - w_h||_{L2(Sigma)} by element-wise Gauss quadrature, graded toward t = 0.
double l2_error(const BoundaryMesh& mesh, const Vector& w, const SineSeries& reference,
                int gauss_order = 8);

/// eoc_k = log2(err_{k-1} / err_k) for k = 1..n-1; empty where an error is not positive.
std::vector<std::optional<double>> eoc(const std::vector<double>& errors);

/// Element means of the reference flux (the L2-best piecewise constant).
Vector project_flux(const BoundaryMesh& mesh, const SineSeries& reference, int gauss_order = 8);

} // namespace heatbem
