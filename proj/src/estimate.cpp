#include "phasebound/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "phasebound/errors.hpp"
#include "phasebound/optimize.hpp"
#include "phasebound/tolerances.hpp"

namespace phasebound {

namespace {

double clamp_to(double x, PhaseDomain d) { return std::min(d.b, std::max(d.a, x)); }

// e * log|v| with the convention 0 * log 0 = 0
double power_log(int e, double log_abs) { return e == 0 ? 0.0 : e * log_abs; }

double power_sign(int e, double v) { return (e % 2 != 0 && v < 0.0) ? -1.0 : 1.0; }

std::size_t grid_argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

double mle(const OutcomeTally& tally, const GhzParityModel& model, PhaseDomain domain) {
  if (tally.m < 1) throw DomainError("mle needs m >= 1");
  const double r = static_cast<double>(tally.k_plus - tally.k_minus()) / tally.m;
  return clamp_to(std::acos(std::clamp(r, -1.0, 1.0)) / model.n_qubits(), domain);
}

double posterior_mean(const Posterior& post) {
  const auto& g = *post.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.weights()[i] * g.node(i) * post.density[i];
  return s;
}

double posterior_map(const Posterior& post) { return post.map; }

double posterior_variance(const Posterior& post, double center) {
  const auto& g = *post.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = g.node(i) - center;
    s += g.weights()[i] * d * d * post.density[i];
  }
  return s;
}

Posterior make_posterior(std::shared_ptr<const QuadratureGrid> grid, std::vector<double> density,
                         const std::vector<double>& derivative, OutcomeTally tally) {
  const auto& g = *grid;
  if (density.size() != g.size() || derivative.size() != g.size())
    throw DomainError("posterior tables must match the grid");
  const double z = integrate(density, g);
  if (!(z > 0.0) || !std::isfinite(z)) throw DegeneratePosterior("posterior mass is zero");
  std::vector<double> info(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double p = density[i], d = derivative[i];
    if (p > 0.0) {
      info[i] = d * d / p;
    } else if (d == 0.0) {
      info[i] = 0.0;
    } else {
      throw NonIntegrable("posterior vanishes with nonzero slope at theta=" +
                          std::to_string(g.node(i)));
    }
  }
  const double j = integrate(info, g) / z;
  for (double& p : density) p /= z;
  const double mode = g.node(grid_argmax(density));
  return {std::move(grid), std::move(density), tally, std::log(z), j, mode};
}

PosteriorFactory::PosteriorFactory(PriorDensity prior, GhzParityModel model, int nodes)
    : prior_(std::move(prior)),
      model_(model),
      grid_(std::make_shared<const QuadratureGrid>(prior_.domain(), nodes)),
      has_info_(prior_.has_derivative()) {
  const auto& g = *grid_;
  const std::size_t n = g.size();
  log_c_.resize(n);
  log_s_.resize(n);
  c_.resize(n);
  s_.resize(n);
  log_prior_.resize(n);
  prior_slope_.assign(n, 0.0);
  prior_info_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = g.node(i);
    const double x = model_.half_angle(t);
    c_[i] = std::cos(x);
    s_[i] = std::sin(x);
    log_c_[i] = std::log(std::abs(c_[i]));
    log_s_[i] = std::log(std::abs(s_[i]));
    log_prior_[i] = prior_.log_density(t);
  }
  if (has_info_) {
    try {
      for (std::size_t i = 0; i < n; ++i) {
        prior_slope_[i] = prior_.derivative(g.node(i));
        prior_info_[i] = prior_.information_density(g.node(i));
      }
    } catch (const NonIntegrable&) {
      has_info_ = false;
    }
  }
}

double PosteriorFactory::log_kernel(const OutcomeTally& tally, double theta) const {
  double v = prior_.log_density(theta);
  if (tally.k_plus > 0) v += tally.k_plus * model_.log_prob_plus(theta);
  if (tally.k_minus() > 0) v += tally.k_minus() * model_.log_prob_minus(theta);
  return v;
}

double PosteriorFactory::log_marginal(const OutcomeTally& tally) const {
  const auto& g = *grid_;
  const std::size_t n = g.size();
  const int k = tally.k_plus, j = tally.k_minus();
  if (tally.m < 0 || k < 0 || j < 0) throw DomainError("invalid tally");
  std::vector<double> kernel(n);
  double scale = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    kernel[i] = power_log(2 * k, log_c_[i]) + power_log(2 * j, log_s_[i]) + log_prior_[i];
    if (std::isfinite(kernel[i])) scale = std::max(scale, kernel[i]);
  }
  if (!std::isfinite(scale)) return -std::numeric_limits<double>::infinity();
  for (auto& v : kernel) v = std::exp(v - scale);
  return log_binomial(tally.m, k) + scale + std::log(simpson_sum(kernel, g));
}

Posterior PosteriorFactory::build(const OutcomeTally& tally) const {
  const auto& g = *grid_;
  const std::size_t n = g.size();
  const int k = tally.k_plus, j = tally.k_minus(), m = tally.m;
  if (m < 0 || k < 0 || j < 0) throw DomainError("invalid tally");

  std::vector<double> log_l(n), kernel(n);
  double scale = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    log_l[i] = power_log(2 * k, log_c_[i]) + power_log(2 * j, log_s_[i]);
    kernel[i] = log_l[i] + log_prior_[i];
    if (std::isfinite(kernel[i])) scale = std::max(scale, kernel[i]);
  }
  if (!std::isfinite(scale))
    throw DegeneratePosterior("likelihood times prior vanishes on every node for k=" +
                              std::to_string(k) + " m=" + std::to_string(m));

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(kernel[i] - scale);
  const double z = simpson_sum(w, g);
  if (!(z > 0.0) || !std::isfinite(z))
    throw DegeneratePosterior("posterior normalisation underflows for k=" + std::to_string(k));

  double information = std::numeric_limits<double>::quiet_NaN();
  if (has_info_) {
    // (p')^2/p of likelihood * prior, split as
    //   (L'^2/L) prior + 2 L' prior' + L (prior'^2/prior)
    // with L'^2/L and L' written out so that no 0/0 appears at zeros of cos or sin.
    const double log_n = std::log(static_cast<double>(model_.n_qubits()));
    int e1 = 0, e2 = 0, a1 = 0, a2 = 0;
    double poly_const = 0.0;
    if (m > 0) {
      if (k == 0) {
        e1 = 2; e2 = 2 * j - 2; a1 = 1; a2 = 2 * j - 1; poly_const = j;
      } else if (j == 0) {
        e1 = 2 * k - 2; e2 = 2; a1 = 2 * k - 1; a2 = 1; poly_const = -k;
      } else {
        e1 = 2 * k - 2; e2 = 2 * j - 2; a1 = 2 * k - 1; a2 = 2 * j - 1;
      }
    }
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
      double t1 = 0.0, t2 = 0.0, t3 = 0.0;
      if (m > 0) {
        const double c = c_[i], s = s_[i];
        const double poly = (k > 0 && j > 0) ? j * c * c - k * s * s : poly_const;
        if (poly != 0.0) {
          const double lp = std::log(std::abs(poly));
          const double base = power_log(e1, log_c_[i]) + power_log(e2, log_s_[i]);
          t1 = std::exp(2.0 * log_n + base + 2.0 * lp + log_prior_[i] - scale);
          const double slope = prior_slope_[i];
          if (slope != 0.0) {
            const double sign = power_sign(a1, c) * power_sign(a2, s) * (poly < 0 ? -1.0 : 1.0) *
                                (slope < 0 ? -1.0 : 1.0);
            t2 = 2.0 * sign *
                 std::exp(log_n + power_log(a1, log_c_[i]) + power_log(a2, log_s_[i]) + lp +
                          std::log(std::abs(slope)) - scale);
          }
        }
      }
      if (prior_info_[i] > 0.0) t3 = std::exp(log_l[i] + std::log(prior_info_[i]) - scale);
      q[i] = t1 + t2 + t3;
    }
    information = simpson_sum(q, g) / z;
  }

  // Mode: smallest grid node with the largest kernel, refined on the neighbouring cells.
  const std::size_t best = grid_argmax(kernel);
  double mode = g.node(best);
  const double lo = g.node(best == 0 ? 0 : best - 1);
  const double hi = g.node(std::min(best + 1, n - 1));
  const auto refined = golden_section_max([&](double t) { return log_kernel(tally, t); }, lo, hi,
                                          default_tolerances().refine_rel_width * g.domain().width());
  if (refined.value > kernel[best]) mode = refined.arg;

  for (double& v : w) v /= z;
  return {grid_, std::move(w), tally, log_binomial(m, k) + scale + std::log(z), information, mode};
}

Posterior build_posterior(const PriorDensity& prior, const OutcomeTally& tally,
                          const GhzParityModel& model, int nodes) {
  return PosteriorFactory(prior, model, nodes).build(tally);
}

Estimator Estimator::maximum_likelihood(GhzParityModel model, PhaseDomain domain) {
  Estimator e;
  e.kind_ = EstimatorKind::mle;
  e.name_ = "mle";
  e.model_ = model;
  e.domain_ = make_domain(domain.a, domain.b);
  return e;
}

Estimator Estimator::bayes_mean(std::shared_ptr<const PosteriorFactory> factory) {
  if (!factory) throw DomainError("bayes_mean needs a posterior factory");
  Estimator e;
  e.kind_ = EstimatorKind::bayes_mean;
  e.name_ = "bayes_mean";
  e.domain_ = factory->grid().domain();
  e.model_ = factory->model();
  e.factory_ = std::move(factory);
  return e;
}

Estimator Estimator::bayes_map(std::shared_ptr<const PosteriorFactory> factory) {
  Estimator e = bayes_mean(std::move(factory));
  e.kind_ = EstimatorKind::bayes_map;
  e.name_ = "bayes_map";
  return e;
}

Estimator Estimator::custom(std::function<double(const OutcomeTally&)> f, PhaseDomain domain,
                            std::string name) {
  if (!f) throw DomainError("custom estimator needs a function");
  Estimator e;
  e.kind_ = EstimatorKind::custom;
  e.name_ = std::move(name);
  e.domain_ = make_domain(domain.a, domain.b);
  e.f_ = std::move(f);
  return e;
}

double Estimator::operator()(const OutcomeTally& tally) const {
  switch (kind_) {
    case EstimatorKind::mle:
      return mle(tally, model_, domain_);
    case EstimatorKind::bayes_mean:
      return clamp_to(posterior_mean(factory_->build(tally)), domain_);
    case EstimatorKind::bayes_map:
      return clamp_to(factory_->build(tally).map, domain_);
    case EstimatorKind::custom: {
      const double v = f_(tally);
      if (!std::isfinite(v)) throw NumericalError("estimator '" + name_ + "' is not finite");
      return clamp_to(v, domain_);
    }
  }
  return domain_.a;
}

std::vector<double> Estimator::tabulate(int m, Exec exec) const {
  if (m < 0) throw DomainError("m must be >= 0");
  return map_indexed(
      static_cast<std::size_t>(m) + 1,
      [&](std::size_t k) { return (*this)(OutcomeTally{static_cast<int>(k), m}); }, exec);
}

double estimator_mean(const std::vector<double>& estimates, double theta0,
                      const GhzParityModel& model) {
  const int m = static_cast<int>(estimates.size()) - 1;
  const auto pmf = tally_pmf(model, theta0, m);
  double s = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) s += pmf[k] * estimates[k];
  return s;
}

RiskReport risk_from_estimates(const std::vector<double>& estimates, double theta0,
                               const GhzParityModel& model) {
  if (estimates.empty()) throw DomainError("no estimates");
  const int m = static_cast<int>(estimates.size()) - 1;
  const auto pmf = tally_pmf(model, theta0, m);
  const auto dpmf = tally_pmf_derivative(model, theta0, m);
  double mean = 0.0, slope = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    if (!std::isfinite(estimates[k])) throw NumericalError("non-finite estimate");
    mean += pmf[k] * estimates[k];
    slope += dpmf[k] * estimates[k];
  }
  double var = 0.0, mse = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const double d = estimates[k] - mean;
    const double e = estimates[k] - theta0;
    var += pmf[k] * d * d;
    mse += pmf[k] * e * e;
  }
  return {mean, var, mse, slope};
}

RiskReport frequentist_risk(const Estimator& estimator, double theta0, int m,
                            const GhzParityModel& model, Exec exec) {
  if (m < 1) throw DomainError("frequentist risk needs m >= 1");
  return risk_from_estimates(estimator.tabulate(m, exec), theta0, model);
}

double bias_derivative_fd(const std::vector<double>& estimates, double theta0,
                          const GhzParityModel& model, PhaseDomain domain, double step) {
  const double h = step > 0.0 ? step : 1e-5 * domain.width();
  double lo = theta0 - h, hi = theta0 + h;
  if (lo < domain.a) lo = theta0;
  if (hi > domain.b) hi = theta0;
  if (!(hi > lo)) throw DomainError("finite-difference step does not fit in the domain");
  return (estimator_mean(estimates, hi, model) - estimator_mean(estimates, lo, model)) / (hi - lo);
}

double GaussianDensity::pdf(double x) const {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

GaussianDensity mle_asymptotic_density(double theta0, int m, const GhzParityModel& model) {
  if (m < 1) throw DomainError("m must be >= 1");
  const double f = model.fisher_information(theta0);
  return {theta0, 1.0 / (m * f)};
}

}  // namespace phasebound
