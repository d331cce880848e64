#include "heatbem/reference.hpp"

#include "heatbem/quadrature.hpp"
#include "heatbem/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace heatbem {

namespace {

constexpr double kPi = std::numbers::pi;
// exp(-x) is below 1e-304 beyond this
constexpr double kNegligibleExponent = 700.0;

} // namespace

SineSeries::SineSeries(std::vector<double> coefficients, double alpha)
    : coefficients_(std::move(coefficients)), alpha_(alpha) {
  if (coefficients_.empty())
    throw ConfigError("sine series needs at least one coefficient");
  if (!(alpha > 0.0))
    throw ConfigError("heat capacity alpha must be positive");
}

double SineSeries::flux(Side side, double t) const {
  const double sign = side == Side::Left ? -1.0 : 1.0;
  double sum = 0.0;
  for (int n = 1; n <= order(); ++n) {
    const double decay = n * n * kPi * kPi * t / alpha_;
    if (decay > kNegligibleExponent)
      break;
    // d/dx sin(n pi x) at x = 0 is n pi, at x = 1 it is n pi (-1)^n
    const double slope = side == Side::Left ? 1.0 : ((n % 2) ? -1.0 : 1.0);
    sum += coefficient(n) * n * kPi * slope * std::exp(-decay);
  }
  return sign * sum;
}

double SineSeries::interior(double x, double t) const {
  double sum = 0.0;
  for (int n = 1; n <= order(); ++n) {
    const double decay = n * n * kPi * kPi * t / alpha_;
    if (decay > kNegligibleExponent)
      break;
    sum += coefficient(n) * std::sin(n * kPi * x) * std::exp(-decay);
  }
  return sum;
}

double SineSeries::tail_bound(double t) const {
  if (t <= 0.0)
    return std::numeric_limits<double>::infinity();
  double bound = 0.0;
  const int first = std::max(1, order() - order() / 4);
  for (int n = first; n <= order(); ++n)
    bound = std::max(bound, std::abs(coefficient(n)));
  double tail = 0.0;
  for (long n = order() + 1;; ++n) {
    const double decay = static_cast<double>(n * n) * kPi * kPi * t / alpha_;
    const double term = bound * static_cast<double>(n) * kPi * std::exp(-decay);
    tail += term;
    if (decay > kNegligibleExponent || term < 1e-18 * std::max(tail, 1e-300))
      break;
  }
  return tail;
}

SineSeries expand(const std::function<double(double)>& u0, int n_max, double alpha) {
  if (n_max < 1)
    throw ConfigError("sine series order must be at least 1");
  std::vector<double> b(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const auto r = oracle_quadrature(
        [&](double x) { return 2.0 * u0(x) * std::sin(n * kPi * x); }, 0.0, 1.0, 1e-13);
    if (!r.converged)
      throw NumericalError("sine coefficient " + std::to_string(n) + " did not converge");
    b[static_cast<std::size_t>(n - 1)] = r.value;
  }
  return SineSeries(std::move(b), alpha);
}

SineSeries example1_series(double alpha) { return SineSeries({0.0, 1.0}, alpha); }

SineSeries example2_series(double alpha, int n_max) {
  // 2 sin(pi x) sin(n pi x) = cos((n-1) pi x) - cos((n+1) pi x) and
  // int_0^1 e^{-cx} cos(m pi x) dx = c (1 - (-1)^m e^{-c}) / (c^2 + m^2 pi^2)
  constexpr double c = 10.0;
  const auto cosine_moment = [](int m) {
    const double parity = (m % 2) ? -1.0 : 1.0;
    return c * (1.0 - parity * std::exp(-c)) / (c * c + m * m * kPi * kPi);
  };
  std::vector<double> b(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n)
    b[static_cast<std::size_t>(n - 1)] = 5.0 * (cosine_moment(n - 1) - cosine_moment(n + 1));
  return SineSeries(std::move(b), alpha);
}

} // namespace heatbem
