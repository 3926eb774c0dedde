#include "phasebound/bbound.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "phasebound/errors.hpp"

namespace phasebound {

GhoshInputs ghosh_inputs(const Posterior& post) {
  return {post, posterior_mean(post), post.grid->domain()};
}

double boundary_term(const GhoshInputs& in) {
  const double pa = in.posterior.density_at_a();
  const double pb = in.posterior.density_at_b();
  if (pa == 0.0 && pb == 0.0) return 0.0;
  const double a = in.domain.a, b = in.domain.b;
  return b * pb - a * pa - in.theta_bl * (pb - pa);
}

double ghosh_bound(const GhoshInputs& in) {
  const double j = in.posterior.information;
  if (std::isnan(j))
    throw NonIntegrable("posterior information unavailable (prior without a usable derivative)");
  if (!std::isfinite(j)) throw NonIntegrable("posterior information diverges");
  if (!(j > 0.0)) throw NumericalError("posterior information is zero");
  const double f = boundary_term(in);
  return (f - 1.0) * (f - 1.0) / j;
}

BayesTallyTable bayes_tally_table(const PosteriorFactory& factory, int m, CenterChoice center,
                                  Exec exec) {
  if (m < 0) throw DomainError("m must be >= 0");
  struct Row {
    double estimate, variance, ghosh, log_marginal;
    std::string error;
  };
  const auto rows = map_indexed<Row>(
      static_cast<std::size_t>(m) + 1,
      [&](std::size_t k) {
        const auto post = factory.build(OutcomeTally{static_cast<int>(k), m});
        const double c = center == CenterChoice::mean ? posterior_mean(post) : post.map;
        double g = std::numeric_limits<double>::quiet_NaN();
        std::string error;
        try {
          g = ghosh_bound({post, c, post.grid->domain()});
        } catch (const NumericalError& e) {
          error = std::string(e.what()) + " (tally k=" + std::to_string(k) +
                  ", m=" + std::to_string(m) + ")";
        }
        return Row{c, posterior_variance(post, c), g, post.log_marginal, error};
      },
      exec);
  BayesTallyTable t;
  t.m = m;
  for (const auto& r : rows) {
    t.estimate.push_back(r.estimate);
    t.variance.push_back(r.variance);
    t.ghosh.push_back(r.ghosh);
    t.log_marginal.push_back(r.log_marginal);
    if (t.ghosh_error.empty()) t.ghosh_error = r.error;
  }
  return t;
}

void BayesTallyTable::require_ghosh() const {
  if (!ghosh_error.empty()) throw NumericalError(ghosh_error);
}

namespace {

double weighted(const std::vector<double>& v, double theta0, const GhzParityModel& model) {
  const int m = static_cast<int>(v.size()) - 1;
  const auto pmf = tally_pmf(model, theta0, m);
  double s = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) s += pmf[k] * v[k];
  return s;
}

}  // namespace

double averaged_ghosh(const BayesTallyTable& table, double theta0, const GhzParityModel& model) {
  table.require_ghosh();
  return weighted(table.ghosh, theta0, model);
}

double averaged_ghosh(double theta0, int m, const GhzParityModel& model, const PriorDensity& prior,
                      int nodes, Exec exec) {
  const PosteriorFactory factory(prior, model, nodes);
  return averaged_ghosh(bayes_tally_table(factory, m, CenterChoice::mean, exec), theta0, model);
}

double averaged_posterior_variance(const BayesTallyTable& table, double theta0,
                                   const GhzParityModel& model) {
  return weighted(table.variance, theta0, model);
}

Posterior lbvm_reference(double theta0, int m, const GhzParityModel& model, PhaseDomain domain,
                         int nodes) {
  if (m < 1) throw DomainError("lbvm_reference needs m >= 1");
  if (!domain.contains(theta0)) throw DomainError("theta0 outside the domain");
  const double var = 1.0 / (m * model.fisher_information(theta0));
  auto grid = std::make_shared<const QuadratureGrid>(domain, nodes);
  std::vector<double> p(grid->size()), dp(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double d = grid->node(i) - theta0;
    p[i] = std::exp(-0.5 * d * d / var);
    dp[i] = -d / var * p[i];
  }
  return make_posterior(std::move(grid), std::move(p), dp, OutcomeTally{0, m});
}

}  // namespace phasebound
