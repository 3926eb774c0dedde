#include "phasebound/prior.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "phasebound/errors.hpp"
#include "phasebound/special.hpp"

namespace phasebound {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// log|e^t - 1|
double log_abs_expm1(double t) {
  if (t > 30.0) return t + std::log1p(-std::exp(-t));
  return std::log(std::abs(std::expm1(t)));
}

double sin2_2theta(double theta) {
  const double s = std::sin(2.0 * theta);
  return s * s;
}

}  // namespace

double family45_log_normalizer(double alpha) {
  if (alpha == 0.0) throw DomainError("family45 normaliser vanishes at alpha = 0");
  const double x = 0.5 * alpha;
  if (std::abs(alpha) < 1.0) {
    const double z = std::expm1(x) * bessel_i0(x) + bessel_i0m1(x);
    return std::log(std::abs(z));
  }
  if (alpha < 0.0) return std::log1p(-bessel_i0e(x));
  const double e = bessel_i0e(x);
  return alpha + std::log(e) + std::log1p(-std::exp(-alpha) / e);
}

PriorDensity PriorDensity::flat(PhaseDomain domain) {
  PriorDensity p;
  p.kind_ = PriorKind::flat;
  p.domain_ = make_domain(domain.a, domain.b);
  p.label_ = "flat";
  return p;
}

PriorDensity PriorDensity::family45(double alpha) {
  if (!std::isfinite(alpha)) throw DomainError("family45 prior needs a finite alpha");
  PriorDensity p;
  p.kind_ = PriorKind::family45;
  p.domain_ = {0.0, kHalfPi};
  p.alpha_ = alpha;
  if (alpha != 0.0) {
    p.log_abs_z_ = family45_log_normalizer(alpha);
    p.z_sign_ = alpha > 0.0 ? 1.0 : -1.0;
    if (!std::isfinite(p.log_abs_z_))
      throw NumericalError("family45 normaliser is not finite for this alpha");
  }
  p.label_ = "family45";
  return p;
}

PriorDensity PriorDensity::custom(PhaseDomain domain, std::function<double(double)> density,
                                  std::function<double(double)> derivative, std::string label) {
  if (!density) throw DomainError("custom prior needs a density function");
  PriorDensity p;
  p.kind_ = PriorKind::custom;
  p.domain_ = make_domain(domain.a, domain.b);
  p.density_ = std::move(density);
  p.derivative_ = std::move(derivative);
  p.label_ = std::move(label);
  const QuadratureGrid grid(p.domain_, 2001);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    v[i] = p.density_(grid.node(i));
    if (!(v[i] >= 0.0)) throw DomainError("custom prior density must be nonnegative");
  }
  const double mass = integrate(v, grid);
  if (!(mass > 0.0)) throw DomainError("custom prior has zero mass");
  p.custom_scale_ = 1.0 / mass;
  return p;
}

std::string PriorDensity::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << label_;
  if (kind_ == PriorKind::family45) os << "(alpha=" << alpha_ << ")";
  os << " on [" << domain_.a << ", " << domain_.b << "]";
  return os.str();
}

double PriorDensity::density(double theta) const {
  if (!domain_.contains(theta)) return 0.0;
  switch (kind_) {
    case PriorKind::flat:
      return 1.0 / domain_.width();
    case PriorKind::family45: {
      if (theta == domain_.a || theta == domain_.b) return 0.0;
      const double s2 = sin2_2theta(theta);
      if (alpha_ == 0.0) return 4.0 * s2 / std::numbers::pi;
      const double t = alpha_ * s2;
      if (t == 0.0) return 0.0;
      return kTwoOverPi * std::exp(log_abs_expm1(t) - log_abs_z_);
    }
    case PriorKind::custom:
      return custom_scale_ * density_(theta);
  }
  return 0.0;
}

double PriorDensity::log_density(double theta) const {
  if (!domain_.contains(theta)) return -INFINITY;
  switch (kind_) {
    case PriorKind::flat:
      return -std::log(domain_.width());
    case PriorKind::family45: {
      if (theta == domain_.a || theta == domain_.b) return -INFINITY;
      const double s2 = sin2_2theta(theta);
      if (alpha_ == 0.0) return std::log(4.0 * s2 / std::numbers::pi);
      const double t = alpha_ * s2;
      if (t == 0.0) return -INFINITY;
      return std::log(kTwoOverPi) + log_abs_expm1(t) - log_abs_z_;
    }
    case PriorKind::custom:
      return std::log(density(theta));
  }
  return -INFINITY;
}

double PriorDensity::derivative(double theta) const {
  if (!domain_.contains(theta)) return 0.0;
  switch (kind_) {
    case PriorKind::flat:
      return 0.0;
    case PriorKind::family45: {
      const double s4 = std::sin(4.0 * theta);
      if (alpha_ == 0.0) return 8.0 * s4 / std::numbers::pi;
      const double t = alpha_ * sin2_2theta(theta);
      return kTwoOverPi * std::abs(alpha_) * std::exp(t - log_abs_z_) * 2.0 * s4;
    }
    case PriorKind::custom:
      if (!derivative_) throw DomainError("custom prior '" + label_ + "' has no derivative");
      return custom_scale_ * derivative_(theta);
  }
  return 0.0;
}

double PriorDensity::information_density(double theta) const {
  if (!domain_.contains(theta)) return 0.0;
  switch (kind_) {
    case PriorKind::flat:
      return 0.0;
    case PriorKind::family45: {
      const double c = std::cos(2.0 * theta);
      const double c2 = c * c;
      if (alpha_ == 0.0) return 64.0 * c2 / std::numbers::pi;
      const double s2 = sin2_2theta(theta);
      const double t = alpha_ * s2;
      // s2 / (1 - e^{-|t|}) with its 1/|alpha| limit
      const double g = (t == 0.0) ? 1.0 / std::abs(alpha_)
                                  : s2 / -std::expm1(-std::abs(t));
      const double e = alpha_ > 0.0 ? std::exp(t - log_abs_z_) : std::exp(2.0 * t - log_abs_z_);
      return kTwoOverPi * 16.0 * alpha_ * alpha_ * c2 * e * g;
    }
    case PriorKind::custom: {
      const double p = density(theta);
      const double d = derivative(theta);
      if (p > 0.0) return d * d / p;
      if (d == 0.0) return 0.0;
      throw NonIntegrable("prior '" + label_ + "' vanishes with nonzero slope");
    }
  }
  return 0.0;
}

std::vector<double> PriorDensity::values_on(const QuadratureGrid& grid) const {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = density(grid.node(i));
  return v;
}

double PriorDensity::fisher_information(const QuadratureGrid& grid) const {
  if (!vanishes_at_boundaries())
    throw NonIntegrable("prior '" + describe() +
                        "' does not vanish at the domain edges; its information diverges");
  if (!has_derivative()) throw DomainError("prior '" + label_ + "' has no derivative");
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = information_density(grid.node(i));
  return integrate(v, grid);
}

double PriorDensity::mean(const QuadratureGrid& grid) const {
  std::vector<double> p = values_on(grid), tp(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) tp[i] = grid.node(i) * p[i];
  return integrate(tp, grid) / integrate(p, grid);
}

double PriorDensity::variance(const QuadratureGrid& grid) const {
  const double mu = mean(grid);
  std::vector<double> p = values_on(grid), q(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid.node(i) - mu;
    q[i] = d * d * p[i];
  }
  return integrate(q, grid) / integrate(p, grid);
}

}  // namespace phasebound
