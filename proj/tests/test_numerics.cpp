#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/linalg.hpp"
#include "phasebound/optimize.hpp"
#include "phasebound/prior.hpp"
#include "phasebound/quadrature.hpp"
#include "phasebound/special.hpp"

using namespace phasebound;
using std::numbers::pi;

namespace {

double integrate_fn(const QuadratureGrid& g, double (*f)(double)) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.node(i));
  return integrate(v, g);
}

}  // namespace

TEST_CASE("simpson grid basics") {
  const QuadratureGrid g(0.0, pi / 2, 2001);
  double sw = 0.0;
  for (double w : g.weights()) sw += w;
  CHECK(std::abs(sw - pi / 2) < 1e-12);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.node(i) > g.node(i - 1));
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(g.size() - 1) == pi / 2);

  CHECK_THROWS_AS(QuadratureGrid(0.0, 1.0, 4), DomainError);
  CHECK_THROWS_AS(QuadratureGrid(0.0, 1.0, 1), DomainError);
  CHECK_THROWS_AS(QuadratureGrid(1.0, 0.0, 5), DomainError);
}

TEST_CASE("integrate examples") {
  const QuadratureGrid g(0.0, pi / 2, 2001);
  CHECK(std::abs(integrate_fn(g, [](double t) { return std::pow(std::sin(2 * t), 2); }) - pi / 4) < 1e-10);
  CHECK(std::abs(integrate_fn(g, [](double) { return 1.0; }) - pi / 2) < 1e-13);
  CHECK(std::abs(integrate_fn(g, [](double t) { return 4 / pi * std::pow(std::cos(t), 2); }) - 1.0) < 1e-10);

  std::vector<double> bad(g.size(), 1.0);
  bad[7] = NAN;
  CHECK_THROWS_AS(integrate(bad, g), NumericalError);
  std::vector<double> short_v(5, 1.0);
  CHECK_THROWS_AS(integrate(short_v, g), DomainError);
}

TEST_CASE("simpson converges at fourth order") {
  // sin^2 on a non-symmetric interval, so the error does not vanish by periodicity
  const double lo = 0.1, hi = 1.3;
  const double exact = 0.5 * (hi - lo) - 0.25 * (std::sin(2 * hi) - std::sin(2 * lo));
  double prev = 0.0;
  for (int n : {9, 17, 33, 65}) {
    const QuadratureGrid g(lo, hi, n);
    const double err = std::abs(integrate_fn(g, [](double t) { return std::pow(std::sin(t), 2); }) - exact);
    if (prev > 0.0) CHECK(prev / err >= 8.0);
    prev = err;
  }
}

TEST_CASE("error estimate from half resolution") {
  const QuadratureGrid g(0.1, 1.3, 33);
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::exp(g.node(i));
  const Integral r = integrate_with_error(v, g);
  const double exact = std::exp(1.3) - std::exp(0.1);
  CHECK(r.error_estimate > 0.0);
  CHECK(std::abs(r.value - exact) <= 10 * r.error_estimate);
}

TEST_CASE("bessel_i0 examples") {
  CHECK(bessel_i0(0.0) == 1.0);
  CHECK(bessel_i0(1.0) == doctest::Approx(1.2660658777520084).epsilon(1e-14));
  CHECK(bessel_i0(5.0) == doctest::Approx(27.239871823604442).epsilon(1e-14));
  CHECK_THROWS_AS(bessel_i0(701.0), NumericalError);
  CHECK_THROWS_AS(bessel_i0(-701.0), NumericalError);
}

TEST_CASE("bessel_i0 matches the power series") {
  for (double x = -30.0; x <= 30.0; x += 0.37) {
    const double ref = oracle::i0_series(x);
    CHECK(std::abs(bessel_i0(x) - ref) <= 1e-12 * ref);
    CHECK(std::abs(bessel_i0_series(x) - ref) <= 1e-13 * ref);
  }
  // asymptotic branch meets the series at the crossover
  const double x = kBesselSeriesCrossover;
  const double series_e = bessel_i0_series(x) * std::exp(-x);
  CHECK(std::abs(bessel_i0e_asymptotic(x) - series_e) <= 1e-11 * series_e);
}

TEST_CASE("bessel_i0 increasing and at least one") {
  double prev = 0.0;
  for (double x = 0.0; x < 700.0; x += 1.7) {
    const double v = bessel_i0(x);
    CHECK(v >= 1.0);
    CHECK(v > prev);
    prev = v;
  }
  for (double x : {1e-8, 1e-4, 0.3, 3.0, 40.0}) {
    CHECK(bessel_i0m1(x) == doctest::Approx(oracle::i0_series(x) - 1.0).epsilon(1e-12));
    CHECK(bessel_i0e(x) == doctest::Approx(oracle::i0_series(x) * std::exp(-x)).epsilon(1e-12));
  }
}

TEST_CASE("family45 prior examples") {
  const QuadratureGrid g(0.0, pi / 2, 2001);
  for (double alpha : {-100.0, -10.0, -1e-6, 1e-6, 1.0, 10.0, 300.0}) {
    const auto p = PriorDensity::family45(alpha);
    CHECK(p.density(0.0) == 0.0);
    CHECK(p.density(pi / 2) == 0.0);
    CHECK(p.vanishes_at_boundaries());
    double mass = 0.0;
    const auto v = p.values_on(g);
    mass = integrate(v, g);
    CHECK(std::abs(mass - 1.0) < 1e-9);
  }
  const auto zero = PriorDensity::family45(0.0);
  CHECK(zero.density(pi / 4) == doctest::Approx(4 / pi).epsilon(1e-14));

  // continuity of the alpha -> 0 limit
  for (double t : {0.1, 0.4, pi / 4, 1.2}) {
    const double lim = 4 / pi * std::pow(std::sin(2 * t), 2);
    CHECK(std::abs(PriorDensity::family45(1e-6).density(t) - lim) < 1e-4);
    CHECK(std::abs(PriorDensity::family45(-1e-6).density(t) - lim) < 1e-4);
  }

  // alpha = 10 against the closed normaliser with I0(5) from the series oracle
  const double z = std::exp(5.0) * oracle::i0_series(5.0) - 1.0;
  const double t = 0.6;
  CHECK(PriorDensity::family45(10.0).density(t) ==
        doctest::Approx(2 / pi * std::expm1(10 * std::pow(std::sin(2 * t), 2)) / z).epsilon(1e-12));
  // log-space normaliser: no overflow far beyond e^700
  CHECK(std::isfinite(PriorDensity::family45(2000.0).density(pi / 4)));
  CHECK_THROWS_AS(PriorDensity::family45(INFINITY), DomainError);
}

TEST_CASE("prior derivative matches finite differences") {
  for (double alpha : {-10.0, 0.0, 1.0, 10.0}) {
    const auto p = PriorDensity::family45(alpha);
    for (double t : {0.2, 0.7, 1.1}) {
      const double h = 1e-6;
      const double fd = (p.density(t + h) - p.density(t - h)) / (2 * h);
      CHECK(p.derivative(t) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  const auto flat = PriorDensity::flat();
  CHECK(flat.density(0.3) == doctest::Approx(2 / pi));
  CHECK(!flat.vanishes_at_boundaries());
  const QuadratureGrid g(0.0, pi / 2, 2001);
  CHECK_THROWS_AS(flat.fisher_information(g), NonIntegrable);
  CHECK(PriorDensity::family45(10.0).fisher_information(g) > 0.0);
}

TEST_CASE("custom prior is normalised") {
  const auto p = PriorDensity::custom({0.0, 1.0}, [](double t) { return 3.0 * t * t; });
  CHECK(p.density(0.5) == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(!p.has_derivative());
  CHECK(p.density(1.5) == 0.0);
}

TEST_CASE("maximize_1d examples") {
  auto r = maximize_1d([](double l) { return -l * l; }, -1.0, 1.0);
  CHECK(std::abs(r.arg) < 1e-9);
  CHECK(std::abs(r.value) < 1e-18);

  // the single-shot Chapman-Robbins quotient, maximal at the edge
  auto chrb1 = [](double l) { return l * l / std::pow(std::sin(2 * l), 2); };
  r = maximize_1d(chrb1, 1e-9, pi / 4);
  CHECK(r.arg == doctest::Approx(pi / 4).epsilon(1e-9));
  CHECK(r.value == doctest::Approx(pi * pi / 16).epsilon(1e-12));
  const auto dense = oracle::dense_grid_max(chrb1, 1e-9, pi / 4, 100001);
  CHECK(r.value >= dense.value - 1e-15);

  r = maximize_1d([](double x) { return x; }, 2.0, 5.0);
  CHECK(r.arg == 5.0);
  r = maximize_1d([](double x) { return -x; }, 2.0, 5.0);
  CHECK(r.arg == 2.0);

  CHECK_THROWS_AS(maximize_1d([](double) { return NAN; }, 0.0, 1.0), NumericalError);
}

TEST_CASE("maximize_1d is never below the coarse grid and is deterministic") {
  auto f = [](double x) { return std::sin(7 * x) * std::exp(-x) + 0.1 * std::cos(31 * x); };
  SearchOptions o;
  o.coarse_points = 51;
  const auto a = maximize_1d(f, 0.0, 3.0, o);
  const auto coarse = oracle::dense_grid_max(f, 0.0, 3.0, 51);
  CHECK(a.value >= coarse.value);
  o.exec = Exec::parallel;
  const auto b = maximize_1d(f, 0.0, 3.0, o);
  CHECK(a.arg == b.arg);
  CHECK(a.value == b.value);
}

TEST_CASE("solve_spd examples") {
  SymmetricMatrix id(2);
  id.set(0, 0, 1.0);
  id.set(1, 1, 1.0);
  const std::vector<double> d{1.0, 2.0};
  auto s = solve_spd(id, d);
  CHECK(s.coefficients[0] == doctest::Approx(1.0));
  CHECK(s.coefficients[1] == doctest::Approx(2.0));
  CHECK(s.quadratic_form == doctest::Approx(5.0));
  CHECK(s.condition == doctest::Approx(1.0));
  CHECK(!s.ridge_applied);

  SymmetricMatrix diag(2);
  diag.set(0, 0, 2.0);
  diag.set(1, 1, 4.0);
  s = solve_spd(diag, std::vector<double>{2.0, 4.0});
  CHECK(s.coefficients[0] == doctest::Approx(1.0));
  CHECK(s.coefficients[1] == doctest::Approx(1.0));
  CHECK(s.quadratic_form == doctest::Approx(6.0));
}

TEST_CASE("solve_spd against the adjugate inverse") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    double g[9];
    for (double& x : g) x = nd(rng);
    std::vector<double> a(9);
    SymmetricMatrix b(3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = (i == j) ? 0.5 : 0.0;
        for (int k = 0; k < 3; ++k) v += g[3 * i + k] * g[3 * j + k];
        a[3 * i + j] = v;
        b.set(i, j, v);
      }
    const std::vector<double> d{nd(rng), nd(rng), nd(rng)};
    const auto inv = oracle::adjugate_inverse(a);
    const auto s = solve_spd(b, d);
    double form = 0.0;
    for (int i = 0; i < 3; ++i) {
      double x = 0.0;
      for (int j = 0; j < 3; ++j) x += inv[3 * i + j] * d[j];
      CHECK(std::abs(s.coefficients[i] - x) <= 1e-10 * (1.0 + std::abs(x)));
      form += d[i] * x;
    }
    CHECK(std::abs(s.quadratic_form - form) <= 1e-10 * (1.0 + std::abs(form)));
  }
}

TEST_CASE("solve_spd quadratic form is the Rayleigh supremum") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2 + trial % 3;
    std::vector<double> g(n * n);
    for (double& x : g) x = nd(rng);
    SymmetricMatrix b(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        double v = i == j ? 0.1 : 0.0;
        for (int k = 0; k < n; ++k) v += g[i * n + k] * g[j * n + k];
        b.set(i, j, v);
      }
    std::vector<double> d(n);
    for (double& x : d) x = nd(rng);
    const double form = solve_spd(b, d).quadratic_form;
    double best = 0.0;
    for (int s = 0; s < 10000; ++s) {
      std::vector<double> a(n);
      for (double& x : a) x = nd(rng);
      double ad = 0.0, aba = 0.0;
      for (int i = 0; i < n; ++i) {
        ad += a[i] * d[i];
        for (int j = 0; j < n; ++j) aba += a[i] * b(i, j) * a[j];
      }
      best = std::max(best, ad * ad / aba);
    }
    CHECK(best <= form + 1e-9);
    CHECK(best >= 0.5 * form);
  }
}

TEST_CASE("solve_spd failure modes") {
  SymmetricMatrix neg(2);
  neg.set(0, 0, 1.0);
  neg.set(1, 1, -1.0);
  CHECK_THROWS_AS(solve_spd(neg, std::vector<double>{1.0, 1.0}), NumericalError);

  SymmetricMatrix singular(2);
  singular.set(0, 0, 1.0);
  singular.set(0, 1, 1.0);
  singular.set(1, 1, 1.0);
  CHECK_THROWS_AS(solve_spd(singular, std::vector<double>{1.0, -1.0}), NumericalError);

  SymmetricMatrix big(7);
  CHECK_THROWS_AS(solve_spd(big, std::vector<double>(7, 1.0)), DomainError);
}
