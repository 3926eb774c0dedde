#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "phasebound/model.hpp"
#include "phasebound/parallel.hpp"
#include "phasebound/quadrature.hpp"
#include "phasebound/tolerances.hpp"

namespace phasebound {

struct BoundReport {
  std::string name;
  double value = 0.0;
  // crlb: empty; chrb: {lambda}; echrb: {lambda1, lambda2, A};
  // barankin: test points followed by their coefficients
  std::vector<double> argmax;
  double condition = std::numeric_limits<double>::quiet_NaN();
  int evaluations = 0;
};

struct FrequentistOptions {
  PhaseDomain domain{};
  // <est>(theta) of a biased estimator; empty means unbiased (<est> = theta).
  std::function<double(double)> mean_function;
  // d<est>/d theta0 for the lambda -> 0 limit of biased bounds; NaN skips the limit.
  double bias_derivative = std::numeric_limits<double>::quiet_NaN();
  Tolerances tol = default_tolerances();
  Exec exec = Exec::parallel;
};

struct BarankinConfig {
  std::vector<double> test_points;
  bool unbiased = true;
  std::function<double(double)> mean_function;
};

/// bias_derivative^2 / (m F). Throws NumericalError when F = 0.
BoundReport crlb(double theta0, int m, const GhzParityModel& model, double bias_derivative = 1.0);

// sqrt(P(k|theta0)) * (L(k|theta, theta0) - 1) for k = 0..m. The covariance Gram of
// the Barankin family is the matrix of dot products of these vectors.
// Returns an empty vector when theta puts mass on tallies that theta0 excludes.
std::vector<double> weighted_ratio_deviation(const GhzParityModel& model, double theta0,
                                             double theta, int m);

/// Chapman-Robbins quotient at one offset; NaN where it is undefined (lambda = 0, bad support).
double chrb_objective(double theta0, int m, const GhzParityModel& model, double lambda,
                      const FrequentistOptions& options = {});

/// Supremum over admissible offsets, never below the lambda -> 0 limit.
BoundReport chrb(double theta0, int m, const GhzParityModel& model,
                 const FrequentistOptions& options = {});

/// Extended quotient at (lambda1, lambda2) with the optimal A; NaN when undefined.
double echrb_objective(double theta0, int m, const GhzParityModel& model, double lambda1,
                       double lambda2, const FrequentistOptions& options = {},
                       double* best_a = nullptr);

/// Offsets of the extended search: both edges plus `resolution` evenly spaced interior points.
std::vector<double> echrb_axis(double lo, double hi, int resolution);

/// Plain grid maximum at the given resolution (no seeding, no refinement).
BoundReport echrb_grid_max(double theta0, int m, const GhzParityModel& model, int resolution,
                           const FrequentistOptions& options = {});

// Grid maximum (with the Chapman-Robbins argmax added to the axis), coordinate
// golden refinement, and the Chapman-Robbins value as the A = 0 floor.
BoundReport echrb(double theta0, int m, const GhzParityModel& model,
                  const FrequentistOptions& options = {}, const BoundReport* chrb_hint = nullptr);

/// d^T B^{-1} d at fixed test points. Throws on invalid points or ill-conditioning.
BoundReport barankin_at(double theta0, int m, const GhzParityModel& model,
                        const BarankinConfig& config, const FrequentistOptions& options = {});

// Lower estimate of the supremum over test-point placements: the extended bound's
// own quotient, then multistart coordinate search with up to min(m, cap) points.
BoundReport barankin(double theta0, int m, const GhzParityModel& model,
                     const FrequentistOptions& options = {},
                     const BoundReport* echrb_hint = nullptr,
                     const BoundReport* chrb_hint = nullptr);

/// {BB, EChRB, ChRB, CRLB}; throws HierarchyViolation if a link fails by more than the slack.
std::vector<BoundReport> hierarchy_report(double theta0, int m, const GhzParityModel& model,
                                          const FrequentistOptions& options = {});

/// Throws HierarchyViolation naming the first pair with upper < lower - slack.
void check_chain(const std::vector<BoundReport>& ordered, double slack);

}  // namespace phasebound
