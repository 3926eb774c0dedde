#include "phasebound/rbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phasebound/errors.hpp"
#include "phasebound/fbound.hpp"

namespace phasebound {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct NodeRisk {
  double variance, mse, bias2, slope, fisher;
};

}  // namespace

AveragedRisk averaged_risk(const std::vector<double>& estimates, const PriorDensity& prior_true,
                           const GhzParityModel& model, const AverageOptions& options) {
  const int m = static_cast<int>(estimates.size()) - 1;
  if (m < 1) throw DomainError("averaged risk needs m >= 1");
  const QuadratureGrid grid(prior_true.domain(), options.tol.outer_nodes);
  const auto p = prior_true.values_on(grid);
  std::vector<double> omega(grid.size());
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    omega[i] = grid.weights()[i] * p[i];
    mass += omega[i];
  }
  if (!(mass > 0.0)) throw NumericalError("true-phase prior has no mass on the outer grid");
  for (double& w : omega) w /= mass;

  const auto rows = map_indexed<NodeRisk>(
      grid.size(),
      [&](std::size_t i) {
        const double t = grid.node(i);
        const auto r = risk_from_estimates(estimates, t, model);
        const double b = r.mean - t;
        return NodeRisk{r.variance, r.mse, b * b, r.bias_derivative, model.fisher_information(t)};
      },
      options.exec);

  AveragedRisk out{0.0, 0.0, 0.0, 0.0, 0.0, kNaN};
  double mean_f = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out.variance += omega[i] * r.variance;
    out.mse += omega[i] * r.mse;
    out.bias_squared += omega[i] * r.bias2;
    out.acrlb += omega[i] * r.slope * r.slope / (m * r.fisher);
    out.mean_slope += omega[i] * r.slope;
    mean_f += omega[i] * r.fisher;
  }
  if (prior_true.vanishes_at_boundaries() && prior_true.has_derivative()) {
    const double j = prior_true.fisher_information(grid) / mass;
    out.fvtb = out.mean_slope * out.mean_slope / (m * mean_f + j);
  }
  return out;
}

AveragedRisk averaged_risk(const Estimator& estimator, const PriorDensity& prior_true, int m,
                           const GhzParityModel& model, const AverageOptions& options) {
  return averaged_risk(estimator.tabulate(m, options.exec), prior_true, model, options);
}

double avg_estimator_variance(const Estimator& estimator, const PriorDensity& prior_true, int m,
                              const GhzParityModel& model, const AverageOptions& options) {
  return averaged_risk(estimator, prior_true, m, model, options).variance;
}

double avg_mse(const Estimator& estimator, const PriorDensity& prior_true, int m,
               const GhzParityModel& model, const AverageOptions& options) {
  return averaged_risk(estimator, prior_true, m, model, options).mse;
}

double acrlb(const Estimator& estimator, const PriorDensity& prior_true, int m,
             const GhzParityModel& model, const AverageOptions& options) {
  return averaged_risk(estimator, prior_true, m, model, options).acrlb;
}

double fvtb(const Estimator& estimator, const PriorDensity& prior_true, int m,
            const GhzParityModel& model, const AverageOptions& options) {
  if (!prior_true.vanishes_at_boundaries())
    throw NonIntegrable("fvtb needs a prior that vanishes at both edges");
  return averaged_risk(estimator, prior_true, m, model, options).fvtb;
}

void check_average_chain(const AveragedRisk& risk, double slack) {
  std::vector<BoundReport> chain{{"avg variance", risk.variance, {}, kNaN, 0},
                                 {"aCRLB", risk.acrlb, {}, kNaN, 0}};
  if (std::isfinite(risk.fvtb)) chain.push_back({"fVTB", risk.fvtb, {}, kNaN, 0});
  check_chain(chain, slack);
}

double van_trees(const PriorDensity& prior_true, int m, const GhzParityModel& model,
                 const AverageOptions& options) {
  if (m < 0) throw DomainError("m must be >= 0");
  const QuadratureGrid grid(prior_true.domain(), options.tol.posterior_nodes);
  const double j = prior_true.fisher_information(grid);
  std::vector<double> fp(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    fp[i] = model.fisher_information(grid.node(i)) * prior_true.density(grid.node(i));
  const double denom = m * integrate(fp, grid) + j;
  if (!(denom > 0.0)) throw NumericalError("Van Trees denominator is zero");
  return 1.0 / denom;
}

namespace {

// (q0 + q1) Pmin = 1/2 (q0 + q1 - sum_k |q0 P0k - q1 P1k|)
double weighted_pmin(double q0, double q1, double theta0, double theta1, int m,
                     const GhzParityModel& model) {
  if (q0 + q1 == 0.0) return 0.0;
  const auto p0 = tally_pmf(model, theta0, m);
  const auto p1 = tally_pmf(model, theta1, m);
  double s = 0.0;
  for (std::size_t k = 0; k < p0.size(); ++k) s += std::abs(q0 * p0[k] - q1 * p1[k]);
  return std::clamp(0.5 * (q0 + q1 - s), 0.0, 0.5 * (q0 + q1));
}

double shifted(double theta0, double h, const PhaseDomain& d) {
  const double t = theta0 + h;
  // theta0 = b - h must land exactly on b
  if (t > d.b && t - d.b < 1e-12 * d.width()) return d.b;
  return t;
}

double zzb_inner(const PriorDensity& prior, double h, int m, const GhzParityModel& model,
                 int nodes) {
  const auto& d = prior.domain();
  const double hi = d.b - h;
  if (!(hi > d.a)) return 0.0;
  const QuadratureGrid grid(d.a, hi, nodes);
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t0 = grid.node(i);
    const double t1 = shifted(t0, h, d);
    s += grid.weights()[i] *
         weighted_pmin(prior.density(t0), prior.density(t1), t0, t1, m, model);
  }
  return s;
}

}  // namespace

HypothesisTestCell pmin(double theta0, double h, const PriorDensity& prior_true, int m,
                        const GhzParityModel& model) {
  if (!(h > 0.0)) throw DomainError("pmin needs h > 0");
  if (m < 0) throw DomainError("m must be >= 0");
  const double t1 = shifted(theta0, h, prior_true.domain());
  const double q0 = prior_true.density(theta0);
  const double q1 = prior_true.density(t1);
  if (q0 + q1 == 0.0) return {theta0, h, 0.0, true};
  const double w0 = q0 / (q0 + q1), w1 = q1 / (q0 + q1);
  const auto p0 = tally_pmf(model, theta0, m);
  const auto p1 = tally_pmf(model, t1, m);
  double s = 0.0;
  for (std::size_t k = 0; k < p0.size(); ++k) s += std::abs(w0 * p0[k] - w1 * p1[k]);
  return {theta0, h, std::clamp(0.5 * (1.0 - s), 0.0, 0.5), false};
}

double ziv_zakai(const PriorDensity& prior_true, int m, const GhzParityModel& model,
                 const AverageOptions& options) {
  if (m < 0) throw DomainError("m must be >= 0");
  const auto& tol = options.tol;
  const double width = prior_true.domain().width();

  // Coarse pass to find where the h integrand has died out.
  const int coarse_n = tol.zzb_nodes;
  const auto coarse = map_indexed(
      static_cast<std::size_t>(coarse_n),
      [&](std::size_t i) {
        const double h = width * static_cast<double>(i) / (coarse_n - 1);
        return h * zzb_inner(prior_true, h, m, model, 51);
      },
      options.exec);
  const double dh = width / (coarse_n - 1);
  std::vector<double> tail(static_cast<std::size_t>(coarse_n), 0.0);
  for (int i = coarse_n - 2; i >= 0; --i)
    tail[static_cast<std::size_t>(i)] =
        tail[static_cast<std::size_t>(i) + 1] + 0.5 * dh * (coarse[i] + coarse[i + 1]);
  const double total = tail[0];
  if (!(total > 0.0)) return 0.0;
  int cut = coarse_n - 1;
  while (cut > 2 && tail[static_cast<std::size_t>(cut - 1)] <= tol.zzb_tail_cut * total) --cut;
  const double h_cut = width * static_cast<double>(cut) / (coarse_n - 1);

  const QuadratureGrid hgrid(0.0, h_cut, tol.zzb_nodes);
  const auto g = map_indexed(
      hgrid.size(),
      [&](std::size_t i) {
        const double h = hgrid.node(i);
        return h * zzb_inner(prior_true, h, m, model, tol.zzb_nodes);
      },
      options.exec);
  return 0.5 * simpson_sum(g, hgrid);
}

bool same_prior(const PriorDensity& x, const PriorDensity& y) {
  if (x.kind() != y.kind() || x.kind() == PriorKind::custom) return false;
  if (x.domain().a != y.domain().a || x.domain().b != y.domain().b) return false;
  return x.kind() != PriorKind::family45 || x.alpha() == y.alpha();
}

RandomBayesReport random_bayes_report(const PriorDensity& prior_bayes,
                                      const PriorDensity& prior_true, int m,
                                      const GhzParityModel& model,
                                      const AverageOptions& options) {
  const int nodes = options.tol.posterior_nodes;
  const PosteriorFactory bayes(prior_bayes, model, nodes);
  const auto table = bayes_tally_table(bayes, m, CenterChoice::mean, options.exec);
  const bool same = same_prior(prior_bayes, prior_true);

  std::vector<double> log_pk = table.log_marginal;
  if (!same) {
    const PosteriorFactory truth(prior_true, model, nodes);
    log_pk = map_indexed(
        static_cast<std::size_t>(m) + 1,
        [&](std::size_t k) { return truth.log_marginal(OutcomeTally{static_cast<int>(k), m}); },
        options.exec);
  }
  RandomBayesReport r{0.0, 0.0, kNaN, same && prior_bayes.vanishes_at_boundaries(),
                      table.ghosh_error};
  for (std::size_t k = 0; k < log_pk.size(); ++k) {
    const double pk = std::exp(log_pk[k]);
    r.bayes_variance += pk * table.variance[k];
    r.agbr += pk * table.ghosh[k];
  }
  if (prior_true.vanishes_at_boundaries() && prior_true.has_derivative())
    r.vtb = van_trees(prior_true, m, model, options);
  if (!table.ghosh_error.empty()) r.agbr = kNaN;
  if (r.matched) {
    table.require_ghosh();
    check_chain({{"Bayes avg variance", r.bayes_variance, {}, kNaN, 0},
                 {"aGBr", r.agbr, {}, kNaN, 0},
                 {"VTB", r.vtb, {}, kNaN, 0}},
                options.tol.hierarchy_slack);
  }
  return r;
}

double agbr(const PriorDensity& prior_bayes, const PriorDensity& prior_true, int m,
            const GhzParityModel& model, const AverageOptions& options) {
  const auto r = random_bayes_report(prior_bayes, prior_true, m, model, options);
  if (!r.ghosh_error.empty()) throw NumericalError(r.ghosh_error);
  return r.agbr;
}

double bayes_avg_posterior_variance(const PriorDensity& prior_bayes,
                                    const PriorDensity& prior_true, int m,
                                    const GhzParityModel& model, const AverageOptions& options) {
  return random_bayes_report(prior_bayes, prior_true, m, model, options).bayes_variance;
}

}  // namespace phasebound
