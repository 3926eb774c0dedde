#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phasebound/quadrature.hpp"

namespace phasebound {

enum class PriorKind { flat, family45, custom };

// Density of the phase on [a, b]. Three forms:
//   flat      1/(b-a)
//   family45  (2/pi) (e^{alpha sin^2 2t} - 1) / (e^{alpha/2} I0(alpha/2) - 1) on [0, pi/2],
//             with the alpha = 0 limit 4 sin^2(2t)/pi
//   custom    user density (and optionally its derivative), normalised numerically
class PriorDensity {
 public:
  static PriorDensity flat(PhaseDomain domain = {});
  static PriorDensity family45(double alpha);
  // Normalised on a 2001-node Simpson grid. Without a derivative the prior has
  // no Fisher information (van_trees etc. reject it).
  static PriorDensity custom(PhaseDomain domain, std::function<double(double)> density,
                             std::function<double(double)> derivative = {},
                             std::string label = "custom");

  PriorKind kind() const { return kind_; }
  const PhaseDomain& domain() const { return domain_; }
  double alpha() const { return alpha_; }
  std::string describe() const;

  /// Zero outside [a, b].
  double density(double theta) const;
  /// -inf where the density vanishes.
  double log_density(double theta) const;
  double derivative(double theta) const;
  // (p')^2 / p, with 0 where both vanish. Throws NonIntegrable where p = 0 and p' != 0.
  double information_density(double theta) const;
  bool has_derivative() const { return kind_ != PriorKind::custom || static_cast<bool>(derivative_); }

  double boundary_a() const { return density(domain_.a); }
  double boundary_b() const { return density(domain_.b); }
  bool vanishes_at_boundaries() const { return boundary_a() == 0.0 && boundary_b() == 0.0; }

  std::vector<double> values_on(const QuadratureGrid& grid) const;

  /// J_prior = integral of (p')^2/p on the grid.
  double fisher_information(const QuadratureGrid& grid) const;

  double mean(const QuadratureGrid& grid) const;
  double variance(const QuadratureGrid& grid) const;

 private:
  PriorDensity() = default;

  PriorKind kind_ = PriorKind::flat;
  PhaseDomain domain_{};
  double alpha_ = 0.0;
  // family45: log|Z| and sign(Z) of the normaliser e^{alpha/2} I0(alpha/2) - 1
  double log_abs_z_ = 0.0;
  double z_sign_ = 1.0;
  std::function<double(double)> density_;
  std::function<double(double)> derivative_;
  double custom_scale_ = 1.0;
  std::string label_;
};

/// log(|e^{alpha/2} I0(alpha/2) - 1|) for the family45 normaliser; alpha != 0.
double family45_log_normalizer(double alpha);

}  // namespace phasebound
