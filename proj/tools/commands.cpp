#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>

#include "CLI11.hpp"
#include "phasebound/bbound.hpp"
#include "phasebound/engine.hpp"
#include "phasebound/estimate.hpp"
#include "phasebound/fbound.hpp"
#include "phasebound/parallel.hpp"
#include "phasebound/rbound.hpp"

namespace phasebound::cli {

namespace {

using Row = std::vector<double>;

Tolerances tolerances_for(const RunConfig& c) {
  Tolerances t = default_tolerances();
  t.posterior_nodes = c.grid_nodes;
  t.outer_nodes = c.outer_nodes;
  t.zzb_nodes = c.zzb_nodes;
  return t;
}

PhaseDomain domain_of(const RunConfig& c) { return make_domain(c.domain_a, c.domain_b); }

// Rows are computed in parallel over m; the inner kernels run serially so the
// work splits once. Rows come back in m order.
template <class F>
std::vector<Row> sweep(const std::vector<int>& ms, F&& row) {
  return map_indexed<Row>(ms.size(), [&](std::size_t i) { return row(ms[i]); });
}

void require_order(double upper, double lower, const char* upper_name, const char* lower_name,
                   int m, double slack) {
  if (upper < lower - slack)
    throw HierarchyViolation("m=" + std::to_string(m) + ": " + upper_name + " = " +
                                 format_number(upper) + " < " + lower_name + " = " +
                                 format_number(lower),
                             upper_name, lower_name);
}

PriorDensity prior_for(const RunConfig& c, double alpha) {
  if (c.prior_kind == "flat") return PriorDensity::flat(domain_of(c));
  return PriorDensity::family45(alpha);
}

std::string alpha_suffix(double alpha) { return "_alpha" + format_number(alpha); }

}  // namespace

CsvTable fig1_table(const RunConfig& c) {
  const GhzParityModel model(c.n_qubits);
  const PhaseDomain domain = domain_of(c);
  const Estimator est = Estimator::maximum_likelihood(model, domain);
  const double theta0 = c.theta0;
  const double fisher = model.fisher_information(theta0);
  const bool mc = c.mc_samples > 0;

  CsvTable t;
  t.columns = {"m", "bias", "freq_std", "crlb_std", "bias_derivative", "mFvar"};
  if (mc) {
    t.columns.push_back("mc_mean");
    t.columns.push_back("mc_std");
  }
  t.rows = sweep(c.sample_sizes(), [&](int m) {
    const auto table = est.tabulate(m, Exec::serial);
    const RiskReport r = risk_from_estimates(table, theta0, model);
    Row row{double(m), r.bias(theta0), std::sqrt(r.variance),
            std::abs(r.bias_derivative) / std::sqrt(m * fisher), r.bias_derivative,
            m * fisher * r.variance};
    if (mc) {
      // The stream of row m depends only on (seed, m).
      SeededSampler sampler(derive_seed(c.seed, static_cast<std::uint64_t>(m)));
      double sum = 0.0, sum2 = 0.0;
      for (int s = 0; s < c.mc_samples; ++s) {
        const double x = table[sample_tally(sampler, theta0, m, model).k_plus];
        sum += x;
        sum2 += x * x;
      }
      const double n = c.mc_samples;
      const double mean = sum / n;
      const double var = n > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1)) : 0.0;
      row.push_back(mean);
      row.push_back(std::sqrt(var));
    }
    return row;
  });
  return t;
}

CsvTable fig2_table(const RunConfig& c) {
  const GhzParityModel model(c.n_qubits);
  FrequentistOptions opts;
  opts.domain = domain_of(c);
  opts.tol = tolerances_for(c);
  opts.exec = Exec::serial;
  const double slack = opts.tol.hierarchy_slack;

  CsvTable t;
  t.columns = {"m", "m_crlb", "m_chrb", "m_echrb", "argmax_lambda"};
  t.rows = sweep(c.sample_sizes(), [&](int m) {
    const BoundReport cr = crlb(c.theta0, m, model);
    const BoundReport ch = chrb(c.theta0, m, model, opts);
    const BoundReport ech = echrb(c.theta0, m, model, opts, &ch);
    require_order(ech.value, ch.value, "EChRB", "ChRB", m, slack);
    require_order(ch.value, cr.value, "ChRB", "CRLB", m, slack);
    return Row{double(m), m * cr.value, m * ch.value, m * ech.value, std::abs(ch.argmax.at(0))};
  });
  return t;
}

CsvTable fig3_table(const RunConfig& c, const PriorDensity& prior) {
  const GhzParityModel model(c.n_qubits);
  const auto factory = std::make_shared<PosteriorFactory>(prior, model, c.grid_nodes);
  const double fisher = model.fisher_information(c.theta0);
  const double slack = default_tolerances().hierarchy_slack;

  CsvTable t;
  t.columns = {"m", "m_freq_var", "m_crlb_biased", "m_bayes_avg_post_var", "m_agb"};
  t.rows = sweep(c.sample_sizes(), [&](int m) {
    const BayesTallyTable table = bayes_tally_table(*factory, m, CenterChoice::mean, Exec::serial);
    const RiskReport r = risk_from_estimates(table.estimate, c.theta0, model);
    const double freq_var = m * r.variance;
    const double crlb_biased = r.bias_derivative * r.bias_derivative / fisher;
    const double post_var = m * averaged_posterior_variance(table, c.theta0, model);
    table.require_ghosh();
    const double agb = m * averaged_ghosh(table, c.theta0, model);
    require_order(post_var, agb, "bayes_avg_post_var", "agb", m, slack);
    require_order(freq_var, crlb_biased, "freq_var", "crlb_biased", m, slack);
    return Row{double(m), freq_var, crlb_biased, post_var, agb};
  });
  return t;
}

CsvTable fig4_table(const RunConfig& c, const PriorDensity& prior) {
  if (!prior.vanishes_at_boundaries())
    throw ConfigError("fig4 needs a prior that vanishes at the domain edges (use family45)");
  const GhzParityModel model(c.n_qubits);
  AverageOptions opts;
  opts.tol = tolerances_for(c);
  opts.exec = Exec::serial;

  // 1/<F> over the prior; the GHZ information is constant, so this is 1/N^2.
  const QuadratureGrid grid(prior.domain(), c.outer_nodes);
  std::vector<double> fp(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    fp[i] = model.fisher_information(grid.node(i)) * prior.density(grid.node(i));
  const double inv_f = 1.0 / integrate(fp, grid);

  CsvTable t;
  t.columns = {"m", "m_bayes_var", "m_agbr", "m_vtb", "m_zzb", "inv_F"};
  t.rows = sweep(c.sample_sizes(), [&](int m) {
    const RandomBayesReport r = random_bayes_report(prior, prior, m, model, opts);
    if (!r.ghosh_error.empty()) throw NumericalError(r.ghosh_error);
    const double zzb = ziv_zakai(prior, m, model, opts);
    return Row{double(m), m * r.bayes_variance, m * r.agbr, m * r.vtb, m * zzb, inv_f};
  });
  return t;
}

CsvTable bounds_table(const RunConfig& c) {
  const GhzParityModel model(c.n_qubits);
  FrequentistOptions opts;
  opts.domain = domain_of(c);
  opts.tol = tolerances_for(c);
  opts.exec = Exec::serial;

  CsvTable t;
  t.columns = {"m",           "m_bb",          "m_echrb",       "m_chrb",   "m_crlb",
               "chrb_lambda", "echrb_lambda1", "echrb_lambda2", "echrb_A", "bb_points",
               "bb_condition"};
  t.rows = sweep(c.sample_sizes(), [&](int m) {
    const auto rep = hierarchy_report(c.theta0, m, model, opts);
    const BoundReport& bb = rep[0];
    const BoundReport& ech = rep[1];
    const BoundReport& ch = rep[2];
    const BoundReport& cr = rep[3];
    return Row{double(m),
               m * bb.value,
               m * ech.value,
               m * ch.value,
               m * cr.value,
               ch.argmax.at(0),
               ech.argmax.at(0),
               ech.argmax.at(1),
               ech.argmax.at(2),
               double(bb.argmax.size() / 2),
               bb.condition};
  });
  return t;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4", "bounds"};
  return names;
}

std::vector<CommandOutput> run_command(const std::string& command, const RunConfig& c) {
  validate(c);
  std::vector<std::string> base{"phasebound " + command};
  for (auto& line : echo_config(c)) base.push_back(line);

  std::vector<CommandOutput> out;
  if (command == "fig1") {
    out.push_back({"", base, fig1_table(c)});
  } else if (command == "fig2") {
    out.push_back({"", base, fig2_table(c)});
  } else if (command == "bounds") {
    out.push_back({"", base, bounds_table(c)});
  } else if (command == "fig3" || command == "fig4") {
    const bool flat = c.prior_kind == "flat";
    const std::vector<double> alphas = flat ? std::vector<double>{0.0} : c.alphas;
    for (double alpha : alphas) {
      const PriorDensity prior = prior_for(c, alpha);
      auto comments = base;
      comments.push_back("prior=" + prior.describe());
      CsvTable table = command == "fig3" ? fig3_table(c, prior) : fig4_table(c, prior);
      out.push_back({flat ? "" : alpha_suffix(alpha), std::move(comments), std::move(table)});
    }
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return out;
}

std::string output_path_for(const std::string& path, const std::string& suffix) {
  if (suffix.empty()) return path;
  const std::filesystem::path p(path);
  std::filesystem::path named = p.parent_path() / (p.stem().string() + suffix + p.extension().string());
  return named.string();
}

namespace {

int thread_limit_from_env() {
  const char* env = std::getenv("PHASEBOUND_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096)
    throw ConfigError(std::string("PHASEBOUND_THREADS must be a positive integer (got '") + env + "')");
  return static_cast<int>(n);
}

int execute(const std::string& command, const std::string& config_path,
            const std::map<std::string, std::string>& overrides, const std::string& out_path,
            std::ostream& out) {
  set_thread_limit(thread_limit_from_env());

  RunConfig config;
  if (!config_path.empty())
    for (const auto& [key, value] : read_config_file(config_path)) apply_setting(config, key, value);
  for (const auto& key : config_keys()) {
    auto it = overrides.find(key);
    if (it != overrides.end()) apply_setting(config, key, it->second);
  }
  if (!out_path.empty()) config.output_path = out_path;

  const auto outputs = run_command(command, config);

  if (config.output_path.empty()) {
    for (const auto& o : outputs) write_csv(out, o.comments, o.table);
    out.flush();
    return 0;
  }
  for (const auto& o : outputs) {
    const std::string path = output_path_for(config.output_path, o.suffix);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open output file '" + path + "'");
    write_csv(f, o.comments, o.table);
    if (!f) throw ConfigError("failed writing '" + path + "'");
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequentist and Bayesian phase-estimation bounds for GHZ parity readout",
               "phasebound"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::map<std::string, std::string> overrides;
  const std::map<std::string, std::string> blurbs{
      {"fig1", "MLE bias and variance against the CRLB"},
      {"fig2", "CRLB, Chapman-Robbins and extended Chapman-Robbins bounds"},
      {"fig3", "Bayesian vs frequentist variance at fixed theta0, one CSV per prior"},
      {"fig4", "random-parameter bounds (aGBr, Van Trees, Ziv-Zakai), one CSV per prior"},
      {"bounds", "full frequentist hierarchy (Barankin, EChRB, ChRB, CRLB) per m"}};
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name, blurbs.at(name));
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--out", out_path, "output CSV path (default stdout)");
    for (const auto& key : config_keys())
      sub->add_option_function<std::string>(
          "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; },
          "override config key " + key);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::string command;
  for (const auto* sub : app.get_subcommands()) command = sub->get_name();

  try {
    return execute(command, config_path, overrides, out_path, out);
  } catch (const HierarchyViolation& e) {
    err << "phasebound: hierarchy violation: " << e.what() << '\n';
    return 4;
  } catch (const DomainError& e) {
    err << "phasebound: config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "phasebound: numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "phasebound: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace phasebound::cli
