#pragma once

// Heat kernel of  alpha * du/dt - d2u/dx2 = 0  in one space dimension and its
// exact time integrals. Every function here is causal: it returns exactly 0
// for a time lag tau <= 0.

namespace heatbem {

struct KernelParams {
  double alpha = 1.0;

  /// Throws ConfigError unless alpha is finite and positive.
  void validate() const;
};

/// Signed spatial distance d = x - y and time lag tau = t - s.
struct SpaceTimeSeparation {
  double d = 0.0;
  double tau = 0.0;
};

/// Complementary error function.
double erfc(double x);

/// U(d, tau) = sqrt(alpha / (4 pi tau)) exp(-alpha d^2 / (4 tau)) for tau > 0.
double fundamental_solution(SpaceTimeSeparation sep, const KernelParams& p);

/// dU/dd.
double kernel_dd(SpaceTimeSeparation sep, const KernelParams& p);

/// dU/dtau. Satisfies d2U/dd2 = alpha dU/dtau.
double kernel_dt(SpaceTimeSeparation sep, const KernelParams& p);

/// I0(d, tau) = int_0^tau U(d, s) ds
///            = sqrt(alpha tau / pi) e^{-z^2} - (alpha |d| / 2) erfc(z),
/// z = sqrt(alpha) |d| / (2 sqrt(tau)).
double primitive_I0(double d, double tau, const KernelParams& p);

/// J0(d, tau) = int_0^tau I0(d, s) ds
///            = sqrt(alpha / pi) e^{-z^2} (2/3 tau^{3/2} + alpha d^2 tau^{1/2} / 6)
///              - erfc(z) (alpha |d| tau / 2 + alpha^2 |d|^3 / 12).
double primitive_J0(double d, double tau, const KernelParams& p);

/// dI0/dd = -(alpha / 2) sign(d) erfc(z). Zero at d = 0.
double primitive_I0_dd(double d, double tau, const KernelParams& p);

/// dJ0/dd = -(alpha / 2) sign(d) int_0^tau erfc(k / sqrt(s)) ds, k = sqrt(alpha) |d| / 2,
/// with int_0^tau erfc(k / sqrt(s)) ds = (tau + 2k^2) erfc(k / sqrt(tau)) - 2k sqrt(tau / pi) e^{-k^2/tau}.
double primitive_J0_dd(double d, double tau, const KernelParams& p);

} // namespace heatbem
