#pragma once

#include <memory>
#include <string>
#include <vector>

#include "phasebound/estimate.hpp"
#include "phasebound/parallel.hpp"

namespace phasebound {

struct GhoshInputs {
  const Posterior& posterior;
  double theta_bl;
  PhaseDomain domain;
};

/// Posterior-mean inputs (the default estimator choice).
GhoshInputs ghosh_inputs(const Posterior& post);

// f = b p(b) - a p(a) - theta_bl (p(b) - p(a)); exactly 0 when both boundary
// values vanish.
double boundary_term(const GhoshInputs& inputs);

// (f - 1)^2 / J with J the Fisher information of the posterior. Throws
// NonIntegrable when J is unavailable or infinite, NumericalError when J = 0.
double ghosh_bound(const GhoshInputs& inputs);

enum class CenterChoice { mean, map };

// Everything the Bayesian bounds need from the m+1 posteriors of one sample size.
struct BayesTallyTable {
  int m = 0;
  std::vector<double> estimate;      // theta_BL (mean or MAP)
  std::vector<double> variance;      // posterior variance about theta_BL
  std::vector<double> ghosh;         // per-tally Ghosh bound, NaN where it failed
  std::vector<double> log_marginal;  // log p(tally) under the table's prior
  std::string ghosh_error;           // first failure (lowest k), empty if none

  /// Throws NumericalError with ghosh_error if any Ghosh entry failed.
  void require_ghosh() const;
};

BayesTallyTable bayes_tally_table(const PosteriorFactory& factory, int m,
                                  CenterChoice center = CenterChoice::mean,
                                  Exec exec = Exec::parallel);

/// sum_k ghosh(k) P(k | theta0).
double averaged_ghosh(const BayesTallyTable& table, double theta0, const GhzParityModel& model);
double averaged_ghosh(double theta0, int m, const GhzParityModel& model, const PriorDensity& prior,
                      int nodes = 2001, Exec exec = Exec::parallel);

/// sum_k variance(k) P(k | theta0): the posterior variance averaged over the likelihood.
double averaged_posterior_variance(const BayesTallyTable& table, double theta0,
                                   const GhzParityModel& model);

// Gaussian with mean theta0 and variance 1/(m F), renormalised on [a, b] over
// the given grid (2001 nodes by default).
Posterior lbvm_reference(double theta0, int m, const GhzParityModel& model,
                         PhaseDomain domain = {}, int nodes = 2001);

}  // namespace phasebound
