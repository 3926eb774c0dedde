#pragma once

#include <string>

#include "phasebound/bbound.hpp"
#include "phasebound/estimate.hpp"
#include "phasebound/parallel.hpp"
#include "phasebound/prior.hpp"
#include "phasebound/tolerances.hpp"

namespace phasebound {

struct AverageOptions {
  Tolerances tol = default_tolerances();
  Exec exec = Exec::parallel;
};

// Averages over theta0 ~ prior_true on the outer Simpson grid. The weights
// w_i p(theta_i) are renormalised to sum to one, so very narrow priors still
// average to the value at their peak.
struct AveragedRisk {
  double variance;       // average estimator variance
  double mse;            // average mean square error
  double bias_squared;   // average squared bias; mse = variance + bias_squared
  double acrlb;          // average of (d<est>/dtheta0)^2 / (m F)
  double mean_slope;     // average of d<est>/dtheta0
  double fvtb;           // NaN unless prior_true vanishes at both edges
};

AveragedRisk averaged_risk(const Estimator& estimator, const PriorDensity& prior_true, int m,
                           const GhzParityModel& model, const AverageOptions& options = {});
/// Same, from estimates tabulated on k = 0..m.
AveragedRisk averaged_risk(const std::vector<double>& estimates, const PriorDensity& prior_true,
                           const GhzParityModel& model, const AverageOptions& options = {});

double avg_estimator_variance(const Estimator& estimator, const PriorDensity& prior_true, int m,
                              const GhzParityModel& model, const AverageOptions& options = {});
double avg_mse(const Estimator& estimator, const PriorDensity& prior_true, int m,
               const GhzParityModel& model, const AverageOptions& options = {});
double acrlb(const Estimator& estimator, const PriorDensity& prior_true, int m,
             const GhzParityModel& model, const AverageOptions& options = {});
/// Throws NonIntegrable for priors that do not vanish at the edges (flat).
double fvtb(const Estimator& estimator, const PriorDensity& prior_true, int m,
            const GhzParityModel& model, const AverageOptions& options = {});

/// Throws HierarchyViolation when variance >= aCRLB >= fVTB fails.
void check_average_chain(const AveragedRisk& risk, double slack);

// 1/(m int F p + J_prior) on the posterior grid. Flat priors are rejected
// (NonIntegrable): their edges break the boundary condition of the bound.
double van_trees(const PriorDensity& prior_true, int m, const GhzParityModel& model,
                 const AverageOptions& options = {});

struct HypothesisTestCell {
  double theta0;
  double h;
  double pmin;  // in [0, 1/2]
  bool empty;   // both prior weights vanish
};

// 1/2 (1 - sum_k |q0 P(k|theta0) - q1 P(k|theta0+h)|) with q0, q1 the prior
// densities at the two phases normalised to sum to one.
HypothesisTestCell pmin(double theta0, double h, const PriorDensity& prior_true, int m,
                        const GhzParityModel& model);

// 1/2 int_0^{b-a} h dh int dtheta0 (p(theta0) + p(theta0+h)) Pmin. Only
// theta0 in [a, b-h] contributes. The h range stops where the remaining tail,
// estimated on a coarse pass, is below zzb_tail_cut of the total.
double ziv_zakai(const PriorDensity& prior_true, int m, const GhzParityModel& model,
                 const AverageOptions& options = {});

struct RandomBayesReport {
  double bayes_variance;  // sum_k p(k) posterior variance(k)
  double agbr;            // sum_k p(k) ghosh(k)
  double vtb;             // NaN when prior_true admits no Van Trees bound
  bool matched;           // prior_bayes == prior_true and f = 0 for every tally
  std::string ghosh_error;  // why agbr is NaN, if it is
};

// p(k) = int P(k|theta) prior_true(theta) on the posterior grid. When the priors
// match and vanish at the edges the chain bayes_variance >= agbr >= vtb is
// asserted (HierarchyViolation otherwise).
RandomBayesReport random_bayes_report(const PriorDensity& prior_bayes,
                                      const PriorDensity& prior_true, int m,
                                      const GhzParityModel& model,
                                      const AverageOptions& options = {});

double agbr(const PriorDensity& prior_bayes, const PriorDensity& prior_true, int m,
            const GhzParityModel& model, const AverageOptions& options = {});
double bayes_avg_posterior_variance(const PriorDensity& prior_bayes,
                                    const PriorDensity& prior_true, int m,
                                    const GhzParityModel& model,
                                    const AverageOptions& options = {});

/// Same kind, parameters and domain.
bool same_prior(const PriorDensity& x, const PriorDensity& y);

}  // namespace phasebound
