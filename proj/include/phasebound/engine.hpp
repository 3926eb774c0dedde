#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "phasebound/model.hpp"

namespace phasebound {

// Sufficient statistic of m shots: k_plus results "+1", m - k_plus results "-1".
struct OutcomeTally {
  int k_plus;
  int m;

  int k_minus() const { return m - k_plus; }
  double multiplicity() const { return binomial(m, k_plus); }
};

OutcomeTally make_tally(int k_plus, int m);

/// P(k | theta) for k = 0..m, from log space.
std::vector<double> tally_pmf(const GhzParityModel& model, double theta, int m);
std::vector<double> log_tally_pmf(const GhzParityModel& model, double theta, int m);

// dP(k|theta)/dtheta = P_k p+' (k - m p+) / (p+ p-). Where p+ p- = 0 the GHZ
// slope p+' vanishes as well and every entry is 0.
std::vector<double> tally_pmf_derivative(const GhzParityModel& model, double theta, int m);

/// sum_k f(k) P(k | theta0), summed in k order. Throws NumericalError if some f(k) is not finite.
double expect_over_tallies(const std::function<double(const OutcomeTally&)>& f, double theta0,
                           int m, const GhzParityModel& model);

/// Same sum against a precomputed pmf.
double expect_over_tallies(const std::function<double(const OutcomeTally&)>& f,
                           const std::vector<double>& pmf);

// xoshiro256** (Blackman & Vigna), state seeded by SplitMix64. Each sampler is
// owned by one task; parallel sweeps derive per-task seeds with derive_seed.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for task `index` of a sweep seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// m Bernoulli(p+) draws, one uniform each.
OutcomeTally sample_tally(SeededSampler& sampler, double theta0, int m,
                          const GhzParityModel& model);

}  // namespace phasebound
