#pragma once

#include <functional>
#include <vector>

namespace heatbem {

using Integrand = std::function<double(double)>;

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (1 <= order <= 64).
const GaussRule& gauss_legendre(int order);

/// Sum of fixed-order Gauss rules over consecutive panels [breaks[i], breaks[i+1]].
double composite_gauss(const Integrand& f, const std::vector<double>& breaks, int order);

/// Breakpoints of [a, b] graded geometrically toward `focus` (which must be a or b):
/// panel widths shrink by `ratio` until they fall below `min_width`.
std::vector<double> graded_breaks(double a, double b, double focus, double ratio,
                                  double min_width);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  int panels = 0;
};

/// Adaptive bisection with a fixed 15-point Gauss rule, accepting a panel when
/// it agrees with the sum over its two halves. A smoothstep substitution
/// x = a + (b - a)(3u^2 - 2u^3) regularizes endpoint singularities of type
/// (x - a)^{-1/2}. Intended as an independent verification oracle.
QuadratureResult oracle_quadrature(const Integrand& f, double a, double b, double tol,
                                   int max_panels = 200000);

} // namespace heatbem
