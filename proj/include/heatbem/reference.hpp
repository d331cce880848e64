#pragma once

#include "heatbem/mesh.hpp"

#include <functional>
#include <vector>

namespace heatbem {

/// Separation-of-variables solution on (0,1) with g = 0:
///   u(x,t) = sum_n b_n sin(n pi x) exp(-n^2 pi^2 t / alpha).
class SineSeries {
public:
  SineSeries(std::vector<double> coefficients, double alpha);

  int order() const { return static_cast<int>(coefficients_.size()); }
  double alpha() const { return alpha_; }
  /// b_n for n >= 1.
  double coefficient(int n) const { return coefficients_[static_cast<std::size_t>(n - 1)]; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  /// Normal derivative on the boundary: -du/dx(0,t) on Left, du/dx(1,t) on Right. t > 0.
  double flux(Side side, double t) const;
  double interior(double x, double t) const;

  /// Bound on the flux contribution of the discarded modes n > order() at time t,
  /// assuming |b_n| does not exceed the largest |b_n| of the last quarter of kept modes.
  double tail_bound(double t) const;

private:
  std::vector<double> coefficients_;
  double alpha_;
};

/// b_n = 2 int_0^1 u0(x) sin(n pi x) dx by adaptive quadrature. Throws
/// NumericalError if a coefficient does not converge.
SineSeries expand(const std::function<double(double)>& u0, int n_max, double alpha);

/// u0 = sin(2 pi x): b_2 = 1.
SineSeries example1_series(double alpha);

/// u0 = 5 exp(-10x) sin(pi x), closed-form coefficients.
SineSeries example2_series(double alpha, int n_max = 20000);

} // namespace heatbem
