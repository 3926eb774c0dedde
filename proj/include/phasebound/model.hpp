#pragma once

#include <functional>
#include <vector>

#include "phasebound/quadrature.hpp"

namespace phasebound {

// Parity readout of an N-qubit GHZ probe: p(+|t) = (1 + cos N t)/2.
class GhzParityModel {
 public:
  explicit GhzParityModel(int n_qubits = 2);

  int n_qubits() const { return n_; }

  double prob_plus(double theta) const;
  /// 1 - prob_plus, so the pair sums to one exactly.
  double prob_minus(double theta) const;
  /// log p(+) = 2 log|cos(N t/2)|, accurate where p(+) is tiny.
  double log_prob_plus(double theta) const;
  double log_prob_minus(double theta) const;
  double dprob_plus(double theta) const;
  double dprob_minus(double theta) const { return -dprob_plus(theta); }

  /// N^2 at every theta (the score cancels analytically).
  double fisher_information(double theta) const;

  /// N t / 2, the half angle in which p(+) = cos^2 and p(-) = sin^2.
  double half_angle(double theta) const { return 0.5 * n_ * theta; }

 private:
  int n_;
};

// theta0 and sample size, checked against a domain.
struct ModelPoint {
  double theta0;
  int m;
};

ModelPoint make_model_point(double theta0, int m, PhaseDomain domain = {});

/// C(m, k): exact product for m <= 50, lgamma above.
double log_binomial(int m, int k);
double binomial(int m, int k);

/// C(m,k) p+^k p-^(m-k), evaluated in log space.
double tally_probability(const GhzParityModel& model, double theta, int m, int k);
double log_tally_probability(const GhzParityModel& model, double theta, int m, int k);

/// Derivative of prob_plus ("+" outcome) or prob_minus.
double dprob_dtheta(const GhzParityModel& model, double theta, bool plus_outcome = true);

double fisher_information(const GhzParityModel& model, double theta);

// Binary-outcome model given by p(+|t) and its derivative. Fisher information
// is the direct sum over outcomes with the 0^2/0 := 0 convention.
class TabulatedBinaryModel {
 public:
  TabulatedBinaryModel(std::function<double(double)> prob_plus,
                       std::function<double(double)> dprob_plus);

  double prob_plus(double theta) const { return p_(theta); }
  double prob_minus(double theta) const { return 1.0 - p_(theta); }
  double dprob_plus(double theta) const { return dp_(theta); }
  // Throws NonIntegrable where an outcome has zero probability but nonzero slope.
  double fisher_information(double theta) const;

 private:
  std::function<double(double)> p_;
  std::function<double(double)> dp_;
};

}  // namespace phasebound
