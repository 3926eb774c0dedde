#include "cli_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "csv.hpp"

namespace phasebound::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& text, const char* why) {
  throw ConfigError("config key '" + key + "': " + why + " (got '" + text + "')");
}

double parse_factor(const std::string& text, const std::string& key) {
  if (text == "pi") return std::numbers::pi;
  double x = 0.0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, x);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end)
    bad_value(key, text, "not a number");
  return x;
}

long long parse_integer(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  long long v = 0;
  const char* end = t.data() + t.size();
  auto res = std::from_chars(t.data(), end, v);
  if (t.empty() || res.ec != std::errc{} || res.ptr != end) bad_value(key, text, "not an integer");
  return v;
}

int parse_int(const std::string& text, const std::string& key) {
  const long long v = parse_integer(text, key);
  if (v < -2147483647LL || v > 2147483647LL) bad_value(key, text, "out of range");
  return static_cast<int>(v);
}

std::vector<int> parse_m_list(const std::string& text, const std::string& key) {
  std::vector<int> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) {
    const auto fields = split(item, ':');
    if (fields.size() == 1) {
      out.push_back(parse_int(fields[0], key));
      continue;
    }
    if (fields.size() > 3) bad_value(key, item, "range must be lo:hi or lo:hi:step");
    const int lo = parse_int(fields[0], key);
    const int hi = parse_int(fields[1], key);
    const int step = fields.size() == 3 ? parse_int(fields[2], key) : 1;
    if (step < 1 || hi < lo) bad_value(key, item, "empty range");
    for (long long m = lo; m <= hi; m += step) out.push_back(static_cast<int>(m));
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

std::vector<int> RunConfig::sample_sizes() const {
  if (!m_list.empty()) return m_list;
  std::vector<int> out;
  for (int m = 1; m <= m_max; ++m) out.push_back(m);
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "model.N", "theta0",      "domain.a",         "domain.b",       "prior.kind",
      "prior.alpha", "m.list",  "m.max",            "grid.nodes",     "grid.outer_nodes",
      "grid.zzb_nodes", "seed", "mc.samples",       "output.path"};
  return keys;
}

double parse_real(const std::string& raw, const std::string& key) {
  std::string text;
  for (char c : raw)
    if (c != ' ' && c != '\t') text += c;
  if (text.empty()) bad_value(key, raw, "empty value");
  double sign = 1.0;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    sign = text[0] == '-' ? -1.0 : 1.0;
    pos = 1;
  }
  // factor (('*'|'/') factor)*
  double value = 1.0;
  char op = '*';
  while (true) {
    const auto next = text.find_first_of("*/", pos);
    const std::string token = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    const double f = parse_factor(token, key);
    value = op == '*' ? value * f : value / f;
    if (next == std::string::npos) break;
    op = text[next];
    pos = next + 1;
  }
  value *= sign;
  if (!std::isfinite(value)) bad_value(key, raw, "not finite");
  return value;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "model.N") {
    c.n_qubits = parse_int(v, key);
  } else if (key == "theta0") {
    c.theta0 = parse_real(v, key);
  } else if (key == "domain.a") {
    c.domain_a = parse_real(v, key);
  } else if (key == "domain.b") {
    c.domain_b = parse_real(v, key);
  } else if (key == "prior.kind") {
    if (v != "family45" && v != "flat") bad_value(key, v, "expected family45 or flat");
    c.prior_kind = v;
  } else if (key == "prior.alpha") {
    c.alphas.clear();
    for (const auto& item : split(v, ',')) c.alphas.push_back(parse_real(item, key));
  } else if (key == "m.list") {
    c.m_list = parse_m_list(v, key);
  } else if (key == "m.max") {
    c.m_max = parse_int(v, key);
  } else if (key == "grid.nodes") {
    c.grid_nodes = parse_int(v, key);
  } else if (key == "grid.outer_nodes") {
    c.outer_nodes = parse_int(v, key);
  } else if (key == "grid.zzb_nodes") {
    c.zzb_nodes = parse_int(v, key);
  } else if (key == "seed") {
    const long long s = parse_integer(v, key);
    if (s < 0) bad_value(key, v, "must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  } else if (key == "mc.samples") {
    c.mc_samples = parse_int(v, key);
  } else if (key == "output.path") {
    c.output_path = v;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text,
                                                                   const std::string& origin) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

void validate(const RunConfig& c) {
  if (c.n_qubits < 1) throw ConfigError("model.N must be >= 1");
  if (!(c.domain_a < c.domain_b)) throw ConfigError("domain.a must be below domain.b");
  if (c.theta0 < c.domain_a || c.theta0 > c.domain_b)
    throw ConfigError("theta0 lies outside [domain.a, domain.b]");
  if (c.prior_kind == "family45") {
    if (c.domain_a != 0.0 || std::abs(c.domain_b - std::numbers::pi / 2) > 1e-15)
      throw ConfigError("prior.kind=family45 is defined on [0, pi/2] only");
    if (c.alphas.empty()) throw ConfigError("prior.alpha needs at least one value");
  }
  if (c.m_list.empty() && c.m_max < 1) throw ConfigError("m.max must be >= 1");
  for (int m : c.m_list)
    if (m < 1) throw ConfigError("m.list entries must be >= 1");
  for (int n : {c.grid_nodes, c.outer_nodes, c.zzb_nodes})
    if (n < 3 || n % 2 == 0) throw ConfigError("grid sizes must be odd and >= 3");
  if (c.mc_samples < 0) throw ConfigError("mc.samples must be >= 0");
}

std::vector<std::string> echo_config(const RunConfig& c) {
  std::string alphas;
  for (std::size_t i = 0; i < c.alphas.size(); ++i)
    alphas += (i ? "," : "") + format_number(c.alphas[i]);
  return {
      "model.N=" + std::to_string(c.n_qubits),
      "theta0=" + format_number(c.theta0),
      "domain.a=" + format_number(c.domain_a),
      "domain.b=" + format_number(c.domain_b),
      "prior.kind=" + c.prior_kind,
      "prior.alpha=" + alphas,
      "m.list=" + join_ints(c.m_list),
      "m.max=" + std::to_string(c.m_max),
      "grid.nodes=" + std::to_string(c.grid_nodes),
      "grid.outer_nodes=" + std::to_string(c.outer_nodes),
      "grid.zzb_nodes=" + std::to_string(c.zzb_nodes),
      "seed=" + std::to_string(c.seed),
      "mc.samples=" + std::to_string(c.mc_samples),
      "output.path=" + c.output_path,
  };
}

}  // namespace phasebound::cli
