#include "phasebound/engine.hpp"

#include <cmath>
#include <string>

#include "phasebound/errors.hpp"

namespace phasebound {

OutcomeTally make_tally(int k_plus, int m) {
  if (m < 0 || k_plus < 0 || k_plus > m)
    throw DomainError("tally needs 0 <= k <= m, got k=" + std::to_string(k_plus) +
                      " m=" + std::to_string(m));
  return {k_plus, m};
}

std::vector<double> log_tally_pmf(const GhzParityModel& model, double theta, int m) {
  if (m < 0) throw DomainError("m must be >= 0");
  if (!std::isfinite(theta)) throw DomainError("phase must be finite");
  const double lp = model.log_prob_plus(theta);
  const double lq = model.log_prob_minus(theta);
  std::vector<double> out(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) {
    double v = log_binomial(m, k);
    if (k > 0) v += k * lp;
    if (m - k > 0) v += (m - k) * lq;
    out[static_cast<std::size_t>(k)] = v;
  }
  return out;
}

std::vector<double> tally_pmf(const GhzParityModel& model, double theta, int m) {
  auto out = log_tally_pmf(model, theta, m);
  for (double& v : out) v = std::exp(v);
  return out;
}

std::vector<double> tally_pmf_derivative(const GhzParityModel& model, double theta, int m) {
  auto pmf = tally_pmf(model, theta, m);
  const double x = model.half_angle(theta);
  const double sc = std::sin(x) * std::cos(x);
  if (sc == 0.0) {
    for (double& v : pmf) v = 0.0;
    return pmf;
  }
  // p+' / (p+ p-) = -N sin x cos x / (sin^2 x cos^2 x)
  const double factor = -model.n_qubits() / sc;
  const double pp = model.prob_plus(theta);
  for (int k = 0; k <= m; ++k) {
    auto& v = pmf[static_cast<std::size_t>(k)];
    v *= factor * (k - m * pp);
  }
  return pmf;
}

double expect_over_tallies(const std::function<double(const OutcomeTally&)>& f,
                           const std::vector<double>& pmf) {
  const int m = static_cast<int>(pmf.size()) - 1;
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double v = f(OutcomeTally{k, m});
    if (!std::isfinite(v))
      throw NumericalError("non-finite value at tally k=" + std::to_string(k));
    sum += v * pmf[static_cast<std::size_t>(k)];
  }
  return sum;
}

double expect_over_tallies(const std::function<double(const OutcomeTally&)>& f, double theta0,
                           int m, const GhzParityModel& model) {
  return expect_over_tallies(f, tally_pmf(model, theta0, m));
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0x6a09e667f3bcc909ULL * (index + 1));
  splitmix64(state);
  return splitmix64(state);
}

SeededSampler::SeededSampler(std::uint64_t seed) : seed_(seed) {
  std::uint64_t state = seed;
  for (auto& s : s_) s = splitmix64(state);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

std::uint64_t SeededSampler::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  ++counter_;
  return result;
}

double SeededSampler::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

OutcomeTally sample_tally(SeededSampler& sampler, double theta0, int m,
                          const GhzParityModel& model) {
  if (m < 1) throw DomainError("sample_tally needs m >= 1");
  const double p = model.prob_plus(theta0);
  int k = 0;
  for (int i = 0; i < m; ++i)
    if (sampler.uniform() < p) ++k;
  return {k, m};
}

}  // namespace phasebound
