#include "heatbem/kernels.hpp"

#include "heatbem/types.hpp"

#include <cmath>
#include <numbers>

namespace heatbem {

namespace {

constexpr double kFlushBelow = 1e-300;
// exp(-x) underflows to subnormal beyond this
constexpr double kMaxExponent = 690.0;

double flush(double v) { return std::abs(v) < kFlushBelow ? 0.0 : v; }

double sign(double d) { return d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0); }

// z^2 = alpha d^2 / (4 tau)
double gaussian_exponent(double d, double tau, double alpha) {
  return alpha * d * d / (4.0 * tau);
}

} // namespace

void KernelParams::validate() const {
  if (!std::isfinite(alpha) || alpha <= 0.0)
    throw ConfigError("heat capacity alpha must be positive and finite");
}

double erfc(double x) { return std::erfc(x); }

double fundamental_solution(SpaceTimeSeparation sep, const KernelParams& p) {
  if (sep.tau <= 0.0)
    return 0.0;
  // prefactor and Gaussian combined in the exponent so tiny tau cannot give 0 * inf
  const double e = -gaussian_exponent(sep.d, sep.tau, p.alpha) +
                   0.5 * std::log(p.alpha / (4.0 * std::numbers::pi * sep.tau));
  return flush(std::exp(e));
}

double kernel_dd(SpaceTimeSeparation sep, const KernelParams& p) {
  if (sep.tau <= 0.0)
    return 0.0;
  return flush(-p.alpha * sep.d / (2.0 * sep.tau) * fundamental_solution(sep, p));
}

double kernel_dt(SpaceTimeSeparation sep, const KernelParams& p) {
  if (sep.tau <= 0.0)
    return 0.0;
  const double z2 = gaussian_exponent(sep.d, sep.tau, p.alpha);
  return flush((z2 - 0.5) / sep.tau * fundamental_solution(sep, p));
}

double primitive_I0(double d, double tau, const KernelParams& p) {
  if (tau <= 0.0)
    return 0.0;
  const double a = p.alpha;
  const double r = std::abs(d);
  const double z2 = gaussian_exponent(r, tau, a);
  if (z2 > kMaxExponent)
    return 0.0;
  const double z = std::sqrt(z2);
  const double v = std::sqrt(a * tau / std::numbers::pi) * std::exp(-z2) -
                   0.5 * a * r * erfc(z);
  return flush(std::max(v, 0.0));
}

double primitive_J0(double d, double tau, const KernelParams& p) {
  if (tau <= 0.0)
    return 0.0;
  const double a = p.alpha;
  const double r = std::abs(d);
  const double z2 = gaussian_exponent(r, tau, a);
  if (z2 > kMaxExponent)
    return 0.0;
  const double z = std::sqrt(z2);
  const double st = std::sqrt(tau);
  const double v =
      std::sqrt(a / std::numbers::pi) * std::exp(-z2) *
          (2.0 / 3.0 * tau * st + a * r * r * st / 6.0) -
      erfc(z) * (0.5 * a * r * tau + a * a * r * r * r / 12.0);
  return flush(std::max(v, 0.0));
}

double primitive_I0_dd(double d, double tau, const KernelParams& p) {
  if (tau <= 0.0 || d == 0.0)
    return 0.0;
  const double z2 = gaussian_exponent(d, tau, p.alpha);
  if (z2 > kMaxExponent)
    return 0.0;
  return flush(-0.5 * p.alpha * sign(d) * erfc(std::sqrt(z2)));
}

double primitive_J0_dd(double d, double tau, const KernelParams& p) {
  if (tau <= 0.0 || d == 0.0)
    return 0.0;
  const double k2 = 0.25 * p.alpha * d * d;
  const double z2 = k2 / tau;
  if (z2 > kMaxExponent)
    return 0.0;
  const double k = std::sqrt(k2);
  const double e = (tau + 2.0 * k2) * erfc(std::sqrt(z2)) -
                   2.0 * k * std::sqrt(tau / std::numbers::pi) * std::exp(-z2);
  return flush(-0.5 * p.alpha * sign(d) * std::max(e, 0.0));
}

} // namespace heatbem
