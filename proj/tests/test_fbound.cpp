#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/estimate.hpp"
#include "phasebound/fbound.hpp"

using namespace phasebound;
using std::numbers::pi;

namespace {

const GhzParityModel ghz{2};

// Unbiased Chapman-Robbins quotient straight from the tally sums:
// lambda^2 / (sum_k P(k|t+l)^2 / P(k|t) - 1).
double chrb_oracle(double t, int m, double l) {
  double s = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double p0 = oracle::binomial_pmf(2, t, m, k), p1 = oracle::binomial_pmf(2, t + l, m, k);
    if (p0 == 0.0) {
      if (p1 > 0.0) return NAN;
      continue;
    }
    s += p1 * p1 / p0;
  }
  return l * l / (s - 1.0);
}

}  // namespace

TEST_CASE("crlb examples") {
  CHECK(crlb(pi / 4, 25, ghz).value == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(crlb(pi / 4, 25, ghz, 0.0).value == 0.0);
  CHECK(crlb(pi / 4, 50, ghz).value == doctest::Approx(crlb(pi / 4, 25, ghz).value / 2));
  CHECK(crlb(0.3, 7, ghz, 0.5).value == doctest::Approx(0.25 / 28));
}

TEST_CASE("chrb single shot closed form") {
  const auto r = chrb(pi / 4, 1, ghz);
  CHECK(r.value == doctest::Approx(pi * pi / 16).epsilon(1e-6));
  CHECK(std::abs(std::abs(r.argmax.at(0)) - pi / 4) < 1e-6);
  const auto dense = oracle::dense_grid_max([](double l) { return chrb_oracle(pi / 4, 1, l); }, -pi / 4,
                                            pi / 4, 200001);
  CHECK(r.value >= dense.value - 1e-12);
}

TEST_CASE("chrb objective against the tally oracle") {
  for (int m : {1, 3, 10})
    for (double l : {-0.7, -0.2, 0.05, 0.3, 0.6})
      CHECK(chrb_objective(pi / 4, m, ghz, l) == doctest::Approx(chrb_oracle(pi / 4, m, l)).epsilon(1e-10));
  CHECK(std::isnan(chrb_objective(pi / 4, 3, ghz, 0.0)));
}

TEST_CASE("chrb tends to the crlb") {
  for (int m : {1, 10, 100}) {
    const double v = chrb_objective(pi / 4, m, ghz, 1e-6);
    CHECK(std::abs(v - 1.0 / (4.0 * m)) <= 1e-4 / (4.0 * m));
  }
  const auto r = chrb(pi / 4, 100, ghz);
  CHECK(r.value * 100 == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("chrb excludes offsets that leave the support") {
  // theta0 = 0 excludes every tally with a "-" result; any offset moves mass there
  CHECK(std::isnan(chrb_objective(0.0, 3, ghz, 0.2)));
  CHECK(weighted_ratio_deviation(ghz, 0.0, 0.2, 3).empty());
  CHECK(!weighted_ratio_deviation(ghz, 0.3, 0.2, 3).empty());
}

TEST_CASE("echrb examples") {
  // the A = 0 slice is the Chapman-Robbins quotient
  FrequentistOptions o;
  for (double l1 : {-0.5, -0.1, 0.2, 0.6}) {
    double a = NAN;
    const double v = echrb_objective(pi / 4, 4, ghz, l1, 0.33, o, &a);
    CHECK(v >= chrb_objective(pi / 4, 4, ghz, l1) - 1e-12);
  }
  const auto c1 = chrb(pi / 4, 1, ghz);
  const auto e1 = echrb(pi / 4, 1, ghz);
  CHECK(e1.value >= 0.61685);
  CHECK(e1.value >= c1.value - 1e-9);
  CHECK(e1.argmax.size() == 3);

  const auto c50 = chrb(pi / 4, 50, ghz);
  const auto e50 = echrb(pi / 4, 50, ghz);
  CHECK(e50.value >= c50.value - 1e-9);
  CHECK(e50.value <= 1.5 * c50.value);
}

TEST_CASE("echrb grid refinement never decreases") {
  for (int m : {2, 5}) {
    int r = 10;
    double prev = echrb_grid_max(pi / 4, m, ghz, r).value;
    for (int i = 0; i < 2; ++i) {
      r = 2 * r + 1;
      const double v = echrb_grid_max(pi / 4, m, ghz, r).value;
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("barankin with one point is the chrb quotient") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-pi / 4, pi / 4);
  for (int i = 0; i < 50; ++i) {
    const double l = u(rng);
    if (std::abs(l) < 1e-3) continue;
    const int m = 1 + i % 7;
    BarankinConfig cfg{{pi / 4 + l}, true, {}};
    const double bb = barankin_at(pi / 4, m, ghz, cfg).value;
    const double ch = chrb_objective(pi / 4, m, ghz, l);
    CHECK(std::abs(bb - ch) <= 1e-10 * ch);
  }
}

TEST_CASE("barankin dominates echrb at the same points and grows with points") {
  for (int m : {2, 4, 8}) {
    const double l1 = -0.4, l2 = 0.25;
    const double e = echrb_objective(pi / 4, m, ghz, l1, l2);
    const double b2 = barankin_at(pi / 4, m, ghz, {{pi / 4 + l1, pi / 4 + l2}, true, {}}).value;
    CHECK(b2 >= e - 1e-12);
    if (m < 3) continue;  // three ratios minus one need at least three free tally cells
    const double b3 = barankin_at(pi / 4, m, ghz, {{pi / 4 + l1, pi / 4 + l2, pi / 4 - 0.1}, true, {}}).value;
    CHECK(b3 >= b2 - 1e-12);
  }
  // m = 2 has only two: the Gram matrix of three points is exactly singular
  CHECK_THROWS_AS(barankin_at(pi / 4, 2, ghz, {{pi / 4 - 0.4, pi / 4 + 0.25, pi / 4 - 0.1}, true, {}}),
                  IllConditioned);
}

TEST_CASE("barankin input checks") {
  CHECK_THROWS_AS(barankin_at(pi / 4, 3, ghz, {{pi / 4}, true, {}}), DomainError);
  CHECK_THROWS_AS(barankin_at(pi / 4, 3, ghz, {{0.3, 0.3}, true, {}}), DomainError);
  CHECK_THROWS_AS(barankin_at(pi / 4, 3, ghz, {{}, true, {}}), DomainError);
  CHECK_THROWS_AS(barankin_at(pi / 4, 3, ghz, {{2.0}, true, {}}), DomainError);
}

TEST_CASE("hierarchy holds for the GHZ model") {
  for (int m = 1; m <= 100; m += (m < 12 ? 1 : 11)) {
    const auto rep = hierarchy_report(pi / 4, m, ghz);
    REQUIRE(rep.size() == 4);
    CHECK(rep[0].name == "BB");
    CHECK(rep[3].name == "CRLB");
    for (int i = 0; i < 3; ++i) CHECK(rep[i].value >= rep[i + 1].value - 1e-9);
  }
  const auto rep = hierarchy_report(pi / 4, 200, ghz);
  for (const auto& b : rep) CHECK(200 * b.value == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("check_chain names the offending pair") {
  std::vector<BoundReport> chain{{"BB", 1.0, {}, NAN, 0}, {"EChRB", 2.0, {}, NAN, 0}};
  try {
    check_chain(chain, 1e-9);
    FAIL("expected a violation");
  } catch (const HierarchyViolation& e) {
    CHECK(e.upper_name == "BB");
    CHECK(e.lower_name == "EChRB");
  }
  chain[1].value = 1.0 + 5e-10;
  CHECK_NOTHROW(check_chain(chain, 1e-9));
}

TEST_CASE("bounds are symmetric under theta0 -> pi/2 - theta0") {
  for (double t : {0.3, 0.6}) {
    for (int m : {1, 3, 9}) {
      CHECK(chrb(t, m, ghz).value == doctest::Approx(chrb(pi / 2 - t, m, ghz).value).epsilon(1e-9));
      CHECK(echrb(t, m, ghz).value == doctest::Approx(echrb(pi / 2 - t, m, ghz).value).epsilon(1e-9));
    }
  }
}

TEST_CASE("MLE variance respects its biased CRLB") {
  const Estimator e = Estimator::maximum_likelihood(ghz);
  for (int m = 1; m <= 100; ++m)
    for (double t : {0.4, pi / 4}) {
      const RiskReport r = frequentist_risk(e, t, m, ghz);
      CHECK(r.variance >= crlb(t, m, ghz, r.bias_derivative).value - 1e-9);
    }
}

TEST_CASE("biased chrb uses the estimator mean") {
  auto factory = std::make_shared<PosteriorFactory>(PriorDensity::family45(10), ghz);
  const auto est = Estimator::bayes_mean(factory);
  const int m = 6;
  const auto tab = est.tabulate(m);
  FrequentistOptions o;
  o.mean_function = [&](double t) { return estimator_mean(tab, t, ghz); };
  const RiskReport r = risk_from_estimates(tab, pi / 4, ghz);
  o.bias_derivative = r.bias_derivative;
  const auto c = chrb(pi / 4, m, ghz, o);
  CHECK(c.value >= crlb(pi / 4, m, ghz, r.bias_derivative).value - 1e-9);
  CHECK(r.variance >= c.value - 1e-9);
}

TEST_CASE("serial and parallel searches agree bit for bit") {
  FrequentistOptions s, p;
  s.exec = Exec::serial;
  p.exec = Exec::parallel;
  for (int m : {3, 20}) {
    const auto a = echrb(pi / 4, m, ghz, s), b = echrb(pi / 4, m, ghz, p);
    CHECK(a.value == b.value);
    CHECK(a.argmax == b.argmax);
    const auto x = barankin(pi / 4, m, ghz, s), y = barankin(pi / 4, m, ghz, p);
    CHECK(x.value == y.value);
  }
}
