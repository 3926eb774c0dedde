#include "phasebound/quadrature.hpp"

#include <cmath>
#include <string>

#include "phasebound/errors.hpp"

namespace phasebound {

PhaseDomain make_domain(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw DomainError("phase domain requires finite a < b");
  return {a, b};
}

QuadratureGrid::QuadratureGrid(double a, double b, int node_count) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw DomainError("quadrature interval requires finite a < b");
  if (node_count < 3 || node_count % 2 == 0)
    throw DomainError("Simpson grid needs an odd node count >= 3, got " +
                      std::to_string(node_count));
  const auto n = static_cast<std::size_t>(node_count);
  const auto intervals = static_cast<double>(n - 1);
  step_ = (b - a) / intervals;
  nodes_.resize(n);
  weights_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Interpolate from both ends so the last node is exactly b.
    const double t = static_cast<double>(i) / intervals;
    nodes_[i] = (i + 1 == n) ? b : a + (b - a) * t;
    weights_[i] = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    weights_[i] *= step_ / 3.0;
  }
}

double simpson_sum(std::span<const double> values, const QuadratureGrid& grid) {
  const auto w = grid.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += w[i] * values[i];
  return sum;
}

namespace {

void check(std::span<const double> values, const QuadratureGrid& grid) {
  if (values.size() != grid.size())
    throw DomainError("integrand has " + std::to_string(values.size()) +
                      " values for a grid of " + std::to_string(grid.size()));
  for (double v : values)
    if (!std::isfinite(v)) throw NumericalError("non-finite integrand value");
}

}  // namespace

double integrate(std::span<const double> values, const QuadratureGrid& grid) {
  check(values, grid);
  return simpson_sum(values, grid);
}

Integral integrate_with_error(std::span<const double> values, const QuadratureGrid& grid) {
  check(values, grid);
  const double fine = simpson_sum(values, grid);
  const std::size_t n = values.size();
  double coarse = 0.0;
  if ((n - 1) % 4 == 0) {
    // Simpson on every second node, step 2h.
    const double h2 = 2.0 * grid.step();
    for (std::size_t i = 0, j = 0; i < n; i += 2, ++j) {
      const bool end = (i == 0 || i + 1 == n);
      coarse += (end ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0)) * values[i];
    }
    coarse *= h2 / 3.0;
    return {fine, std::abs(fine - coarse) / 15.0};
  }
  // Fall back to the trapezoid rule as the lower-order companion.
  for (std::size_t i = 0; i < n; ++i)
    coarse += ((i == 0 || i + 1 == n) ? 0.5 : 1.0) * values[i];
  coarse *= grid.step();
  return {fine, std::abs(fine - coarse)};
}

}  // namespace phasebound
