#include "phasebound/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phasebound/errors.hpp"
#include "phasebound/tolerances.hpp"

namespace phasebound {

GhzParityModel::GhzParityModel(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1) throw DomainError("GHZ model needs N >= 1, got " + std::to_string(n_qubits));
}

double GhzParityModel::prob_plus(double theta) const {
  if (!std::isfinite(theta)) throw DomainError("phase must be finite");
  const double p = 0.5 * (1.0 + std::cos(n_ * theta));
  return std::min(1.0, std::max(0.0, p));
}

double GhzParityModel::prob_minus(double theta) const { return 1.0 - prob_plus(theta); }

double GhzParityModel::log_prob_plus(double theta) const {
  return 2.0 * std::log(std::abs(std::cos(half_angle(theta))));
}

double GhzParityModel::log_prob_minus(double theta) const {
  return 2.0 * std::log(std::abs(std::sin(half_angle(theta))));
}

double GhzParityModel::dprob_plus(double theta) const {
  if (!std::isfinite(theta)) throw DomainError("phase must be finite");
  return -0.5 * n_ * std::sin(n_ * theta);
}

double GhzParityModel::fisher_information(double theta) const {
  // (p+')^2/p+ + (p-')^2/p- = (N^2 sin^2 N t / 4) / (p+ p-) and p+ p- = sin^2(N t)/4.
  if (!std::isfinite(theta)) throw DomainError("phase must be finite");
  return static_cast<double>(n_) * n_;
}

ModelPoint make_model_point(double theta0, int m, PhaseDomain domain) {
  if (!std::isfinite(theta0) || !domain.contains(theta0))
    throw DomainError("theta0 must lie in the phase domain");
  if (m < 1) throw DomainError("sample size m must be >= 1");
  return {theta0, m};
}

double binomial(int m, int k) {
  if (m < 0 || k < 0 || k > m) throw DomainError("binomial needs 0 <= k <= m");
  if (m > default_tolerances().exact_binomial_max_m) return std::exp(log_binomial(m, k));
  if (k > m - k) k = m - k;
  double c = 1.0;
  // c stays an integer at every step: c_i = C(m-k+i, i)
  for (int i = 1; i <= k; ++i) c = c * (m - k + i) / i;
  return c;
}

double log_binomial(int m, int k) {
  if (m < 0 || k < 0 || k > m) throw DomainError("binomial needs 0 <= k <= m");
  if (m <= default_tolerances().exact_binomial_max_m) return std::log(binomial(m, k));
  return std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
}

double log_tally_probability(const GhzParityModel& model, double theta, int m, int k) {
  if (!std::isfinite(theta)) throw DomainError("phase must be finite");
  if (m < 0 || k < 0 || k > m)
    throw DomainError("tally needs 0 <= k <= m, got k=" + std::to_string(k) +
                      " m=" + std::to_string(m));
  double lp = log_binomial(m, k);
  if (k > 0) lp += k * model.log_prob_plus(theta);
  if (m - k > 0) lp += (m - k) * model.log_prob_minus(theta);
  return lp;
}

double tally_probability(const GhzParityModel& model, double theta, int m, int k) {
  return std::exp(log_tally_probability(model, theta, m, k));
}

double dprob_dtheta(const GhzParityModel& model, double theta, bool plus_outcome) {
  return plus_outcome ? model.dprob_plus(theta) : model.dprob_minus(theta);
}

double fisher_information(const GhzParityModel& model, double theta) {
  return model.fisher_information(theta);
}

TabulatedBinaryModel::TabulatedBinaryModel(std::function<double(double)> prob_plus,
                                           std::function<double(double)> dprob_plus)
    : p_(std::move(prob_plus)), dp_(std::move(dprob_plus)) {
  if (!p_ || !dp_) throw DomainError("tabulated model needs p(+) and its derivative");
}

double TabulatedBinaryModel::fisher_information(double theta) const {
  const double p = p_(theta);
  const double d = dp_(theta);
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("tabulated p(+) outside [0, 1]");
  double f = 0.0;
  for (double q : {p, 1.0 - p}) {
    if (q > 0.0) {
      f += d * d / q;
    } else if (d != 0.0) {
      throw NonIntegrable("outcome with zero probability has nonzero slope");
    }
  }
  return f;
}

}  // namespace phasebound
