#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "phasebound/errors.hpp"

namespace phasebound::cli {

/// Malformed or unknown configuration input; maps to exit code 2.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct RunConfig {
  int n_qubits = 2;
  double theta0 = 0.78539816339744831;  // pi/4
  double domain_a = 0.0;
  double domain_b = 1.5707963267948966;
  std::string prior_kind = "family45";
  std::vector<double> alphas{-100.0, -10.0, 1.0, 10.0};
  std::vector<int> m_list;  // empty: 1..m_max
  int m_max = 100;
  int grid_nodes = 2001;
  int outer_nodes = 201;
  int zzb_nodes = 201;
  std::uint64_t seed = 42;
  int mc_samples = 0;
  std::string output_path;  // empty: stdout

  std::vector<int> sample_sizes() const;
};

/// Every accepted key, in the order used when echoing a config.
const std::vector<std::string>& config_keys();

// "0.3", "pi", "-pi/4", "3*pi/8", "0.25*pi". Throws ConfigError.
double parse_real(const std::string& text, const std::string& key);

/// Sets one key from its text form. Unknown keys throw ConfigError.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

// key=value lines; '#' starts a comment, blank lines are ignored.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text,
                                                                   const std::string& origin);
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Cross-key checks (theta0 inside the domain, positive sizes, ...).
void validate(const RunConfig& config);

/// "key=value" for every key, numbers with 17 significant digits.
std::vector<std::string> echo_config(const RunConfig& config);

}  // namespace phasebound::cli
