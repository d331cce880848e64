#include "heatbem/analysis.hpp"

#include "heatbem/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace heatbem {

namespace {

// Panels of one element. The reference flux has an initial layer of width
// ~ alpha / (n pi)^2 for the highest retained mode n, so elements touching
// t = 0 are graded geometrically toward it.
std::vector<double> element_breaks(const BoundaryElement& e) {
  if (e.t_begin > 0.0)
    return {e.t_begin, e.t_end};
  return graded_breaks(e.t_begin, e.t_end, e.t_begin, 0.25, 1e-14 * e.size());
}

} // namespace

std::string_view to_string(KappaConvention c) {
  return c == KappaConvention::SingularValues ? "sv" : "eig";
}

double condition_number(const Matrix& a, KappaConvention convention) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw ConfigError("condition_number needs a nonempty square matrix");
  double largest = 0.0, smallest = 0.0;
  if (convention == KappaConvention::SingularValues) {
    const Eigen::BDCSVD<Matrix> svd(a);
    const Vector& s = svd.singularValues();
    largest = s.maxCoeff();
    smallest = s.minCoeff();
  } else {
    const Eigen::EigenSolver<Matrix> es(a, false);
    if (es.info() != Eigen::Success)
      throw NumericalError("condition_number: eigenvalue iteration failed");
    const Vector moduli = es.eigenvalues().cwiseAbs();
    largest = moduli.maxCoeff();
    smallest = moduli.minCoeff();
  }
  if (!(smallest > 1e-14 * largest))
    throw NumericalError("condition_number: matrix is numerically singular");
  return largest / smallest;
}

double ellipticity_margin(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw ConfigError("ellipticity_margin needs a nonempty square matrix");
  const Matrix sym = 0.5 * (a + a.transpose());
  const Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double l2_error(const BoundaryMesh& mesh, const Vector& w, const SineSeries& reference,
                int gauss_order) {
  if (w.size() != mesh.size())
    throw ConfigError("l2_error: coefficient count does not match the mesh");
  double sum = 0.0;
  for (const auto& e : mesh.elements()) {
    const double c = w(e.index);
    sum += composite_gauss(
        [&](double t) {
          const double diff = reference.flux(e.side, t) - c;
          return diff * diff;
        },
        element_breaks(e), gauss_order);
  }
  return std::sqrt(sum);
}

std::vector<std::optional<double>> eoc(const std::vector<double>& errors) {
  std::vector<std::optional<double>> out;
  for (std::size_t k = 1; k < errors.size(); ++k) {
    if (errors[k - 1] > 0.0 && errors[k] > 0.0)
      out.emplace_back(std::log2(errors[k - 1] / errors[k]));
    else
      out.emplace_back(std::nullopt);
  }
  return out;
}

Vector project_flux(const BoundaryMesh& mesh, const SineSeries& reference, int gauss_order) {
  Vector means(mesh.size());
  for (const auto& e : mesh.elements())
    means(e.index) =
        composite_gauss([&](double t) { return reference.flux(e.side, t); }, element_breaks(e),
                        gauss_order) /
        e.size();
  return means;
}

} // namespace heatbem
