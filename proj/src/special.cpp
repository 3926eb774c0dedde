#include "phasebound/special.hpp"

#include <cmath>
#include <numbers>

#include "phasebound/errors.hpp"

namespace phasebound {

namespace {

// sum_{k>=first} ((x/2)^k / k!)^2
double series_from(double x, int first) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  for (int k = 1; k <= first; ++k) term *= q / (static_cast<double>(k) * k);
  if (first > 0 && term == 0.0) return 0.0;
  double sum = term;
  for (int k = first + 1; k < 100000; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term <= sum * 1e-17) break;
  }
  return sum;
}

}  // namespace

double bessel_i0_series(double x) { return series_from(x, 0); }

double bessel_i0e_asymptotic(double x) {
  // e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k [(2k-1)!!]^2 / (k! (8x)^k); stop at the smallest term.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 500; ++k) {
    const double ratio = (2.0 * k + 1.0) * (2.0 * k + 1.0) / (8.0 * (k + 1.0) * x);
    if (ratio >= 1.0) break;
    term *= ratio;
    sum += term;
    if (term <= sum * 1e-17) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double bessel_i0(double x) {
  const double ax = std::abs(x);
  if (!std::isfinite(ax) || ax > 700.0)
    throw NumericalError("bessel_i0: |x| > 700 overflows");
  if (ax <= kBesselSeriesCrossover) return bessel_i0_series(ax);
  return std::exp(ax) * bessel_i0e_asymptotic(ax);
}

double bessel_i0e(double x) {
  const double ax = std::abs(x);
  if (std::isnan(ax)) throw NumericalError("bessel_i0e: NaN argument");
  if (ax <= kBesselSeriesCrossover) return std::exp(-ax) * bessel_i0_series(ax);
  return bessel_i0e_asymptotic(ax);
}

double bessel_i0m1(double x) {
  const double ax = std::abs(x);
  if (ax > 700.0) throw NumericalError("bessel_i0m1: |x| > 700 overflows");
  if (ax > 1.0) return bessel_i0(ax) - 1.0;
  return series_from(ax, 1);
}

}  // namespace phasebound
