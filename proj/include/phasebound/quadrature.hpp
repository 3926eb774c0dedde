#pragma once

#include <span>
#include <vector>

namespace phasebound {

struct PhaseDomain {
  double a = 0.0;
  double b = 1.5707963267948966;  // pi/2, the GHZ N=2 interval

  double width() const { return b - a; }
  bool contains(double theta) const { return theta >= a && theta <= b; }
};

/// Validates a < b, both finite; throws DomainError otherwise.
PhaseDomain make_domain(double a, double b);

// Uniform composite-Simpson grid. Nodes are shared across all integrands on the
// same interval so likelihood tables can be cached per node.
class QuadratureGrid {
 public:
  /// node_count must be odd and >= 3.
  QuadratureGrid(double a, double b, int node_count);
  QuadratureGrid(PhaseDomain domain, int node_count)
      : QuadratureGrid(domain.a, domain.b, node_count) {}

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  double node(std::size_t i) const { return nodes_[i]; }
  double a() const { return nodes_.front(); }
  double b() const { return nodes_.back(); }
  double step() const { return step_; }
  PhaseDomain domain() const { return {a(), b()}; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double step_;
};

struct Integral {
  double value;
  double error_estimate;  // |fine - coarse| / 15 when a half-resolution Simpson exists
};

/// Composite Simpson. Throws NumericalError on non-finite input, DomainError on size mismatch.
Integral integrate_with_error(std::span<const double> values, const QuadratureGrid& grid);

double integrate(std::span<const double> values, const QuadratureGrid& grid);

/// Simpson sum without the finiteness scan, for inner loops that already guarantee it.
double simpson_sum(std::span<const double> values, const QuadratureGrid& grid);

}  // namespace phasebound
