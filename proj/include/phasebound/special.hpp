#pragma once

namespace phasebound {

/// Modified Bessel function of the first kind, order zero. Throws NumericalError for |x| > 700.
double bessel_i0(double x);

/// exp(-|x|) * I0(x); finite for every x.
double bessel_i0e(double x);

/// I0(x) - 1 without cancellation near zero.
double bessel_i0m1(double x);

/// Power series sum_k (x/2)^(2k) / (k!)^2 summed to machine convergence. Reference for bessel_i0.
double bessel_i0_series(double x);

/// Large-argument expansion of exp(-x) I0(x) for x > 0.
double bessel_i0e_asymptotic(double x);

inline constexpr double kBesselSeriesCrossover = 20.0;

}  // namespace phasebound
