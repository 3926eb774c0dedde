#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "phasebound/engine.hpp"
#include "phasebound/model.hpp"
#include "phasebound/parallel.hpp"
#include "phasebound/prior.hpp"
#include "phasebound/quadrature.hpp"

namespace phasebound {

/// (1/N) arccos((k+ - k-)/m), clamped to the domain.
double mle(const OutcomeTally& tally, const GhzParityModel& model = GhzParityModel{},
           PhaseDomain domain = {});

struct Posterior {
  std::shared_ptr<const QuadratureGrid> grid;
  std::vector<double> density;  // normalised at the grid nodes
  OutcomeTally tally;
  double log_marginal;  // log p(tally) = log C(m,k) + log of the integral of likelihood * prior
  double information;   // integral of (p')^2 / p, NaN when the prior has no derivative
  double map;           // refined mode (grid mode for externally built densities)

  double density_at_a() const { return density.front(); }
  double density_at_b() const { return density.back(); }
};

double posterior_mean(const Posterior& post);
double posterior_map(const Posterior& post);
double posterior_variance(const Posterior& post, double center);
inline double posterior_variance(const Posterior& post) {
  return posterior_variance(post, posterior_mean(post));
}

// Posterior from tabulated density and slope (both unnormalised, same scale).
// The information integral uses 0 where both vanish and throws NonIntegrable
// where the density vanishes with nonzero slope.
Posterior make_posterior(std::shared_ptr<const QuadratureGrid> grid, std::vector<double> density,
                         const std::vector<double>& derivative, OutcomeTally tally);

// Caches per-node likelihood factors and prior values for one (prior, model, grid)
// so that posteriors for many tallies share the work.
class PosteriorFactory {
 public:
  PosteriorFactory(PriorDensity prior, GhzParityModel model, int nodes = 2001);

  const PriorDensity& prior() const { return prior_; }
  const GhzParityModel& model() const { return model_; }
  const QuadratureGrid& grid() const { return *grid_; }
  std::shared_ptr<const QuadratureGrid> grid_ptr() const { return grid_; }

  /// Throws DegeneratePosterior if the normalisation underflows.
  Posterior build(const OutcomeTally& tally) const;

  /// log p(tally) alone, same arithmetic as build().
  double log_marginal(const OutcomeTally& tally) const;

  /// log of likelihood * prior at an arbitrary phase (no binomial factor).
  double log_kernel(const OutcomeTally& tally, double theta) const;

 private:
  PriorDensity prior_;
  GhzParityModel model_;
  std::shared_ptr<const QuadratureGrid> grid_;
  std::vector<double> log_c_, log_s_;    // log|cos x|, log|sin x| with x = N t / 2
  std::vector<double> c_, s_;            // cos x, sin x
  std::vector<double> log_prior_;
  std::vector<double> prior_slope_;      // p'
  std::vector<double> prior_info_;       // (p')^2 / p
  bool has_info_;
};

/// Posterior from a flat or family prior on the default 2001-node grid.
Posterior build_posterior(const PriorDensity& prior, const OutcomeTally& tally,
                          const GhzParityModel& model = GhzParityModel{}, int nodes = 2001);

enum class EstimatorKind { mle, bayes_mean, bayes_map, custom };

class Estimator {
 public:
  static Estimator maximum_likelihood(GhzParityModel model, PhaseDomain domain = {});
  static Estimator bayes_mean(std::shared_ptr<const PosteriorFactory> factory);
  static Estimator bayes_map(std::shared_ptr<const PosteriorFactory> factory);
  static Estimator custom(std::function<double(const OutcomeTally&)> f, PhaseDomain domain = {},
                          std::string name = "custom");

  EstimatorKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  PhaseDomain domain() const { return domain_; }

  /// Always inside [a, b].
  double operator()(const OutcomeTally& tally) const;
  /// Estimates for k = 0..m.
  std::vector<double> tabulate(int m, Exec exec = Exec::parallel) const;

 private:
  EstimatorKind kind_ = EstimatorKind::custom;
  std::string name_;
  PhaseDomain domain_{};
  GhzParityModel model_{};
  std::shared_ptr<const PosteriorFactory> factory_;
  std::function<double(const OutcomeTally&)> f_;
};

struct RiskReport {
  double mean;
  double variance;
  double mse;
  double bias_derivative;  // d<est>/d theta0

  double bias(double theta0) const { return mean - theta0; }
};

// Risk of an estimator tabulated on k = 0..m. The bias derivative differentiates
// the binomial weights analytically.
RiskReport risk_from_estimates(const std::vector<double>& estimates, double theta0,
                               const GhzParityModel& model);

RiskReport frequentist_risk(const Estimator& estimator, double theta0, int m,
                            const GhzParityModel& model, Exec exec = Exec::parallel);

/// <est>(theta0) from tabulated estimates.
double estimator_mean(const std::vector<double>& estimates, double theta0,
                      const GhzParityModel& model);

// Central difference of <est> with step 1e-5 (b - a) by default; one-sided within
// a step of an edge.
double bias_derivative_fd(const std::vector<double>& estimates, double theta0,
                          const GhzParityModel& model, PhaseDomain domain = {},
                          double step = 0.0);

struct GaussianDensity {
  double mean;
  double variance;
  double pdf(double x) const;
};

/// N(theta0, 1/(m F(theta0))).
GaussianDensity mle_asymptotic_density(double theta0, int m, const GhzParityModel& model);

}  // namespace phasebound
