#pragma once

// Independent reference computations. None of these call the library's
// kernels; they use the most direct arithmetic available (raw sequences,
// dense grids, closed forms).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// p(+|theta) = (1 + cos N theta) / 2, straight from the definition.
inline double p_plus(int n, double theta) { return 0.5 * (1.0 + std::cos(n * theta)); }

// Sum over all 2^m raw +/- sequences of f(k_plus) * product of single-shot probabilities.
inline double enumerate_sequences(const std::function<double(int)>& f, int n, double theta, int m) {
  const double pp = p_plus(n, theta), pm = 1.0 - pp;
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double prob = 1.0;
    int k = 0;
    for (int s = 0; s < m; ++s) {
      if (mask >> s & 1u) {
        prob *= pp;
        ++k;
      } else {
        prob *= pm;
      }
    }
    total += f(k) * prob;
  }
  return total;
}

inline double binomial_coefficient(int m, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (m - k + i) / i;
  return c;
}

inline double binomial_pmf(int n, double theta, int m, int k) {
  const double pp = p_plus(n, theta);
  return binomial_coefficient(m, k) * std::pow(pp, k) * std::pow(1.0 - pp, m - k);
}

struct GridMax {
  double arg;
  double value;
};

/// Brute-force maximum on n uniform points; non-finite values are skipped.
inline GridMax dense_grid_max(const std::function<double(double)>& f, double lo, double hi, int n) {
  GridMax best{lo, -INFINITY};
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    const double v = f(x);
    if (std::isfinite(v) && v > best.value) best = {x, v};
  }
  return best;
}

/// Composite trapezoid on n points, for integrals where the library uses Simpson.
inline double trapezoid(const std::function<double(double)>& f, double lo, double hi, int n) {
  const double h = (hi - lo) / (n - 1);
  double s = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n - 1; ++i) s += f(lo + i * h);
  return s * h;
}

// Minimum error of the likelihood-ratio test between theta0 (prior weight w0)
// and theta1 (weight w1), run on every raw sequence. The rule picks the
// hypothesis with the larger posterior weight, theta1 on ties.
inline double decision_rule_error(int n, double theta0, double theta1, double w0, double w1, int m) {
  const double s = w0 + w1;
  w0 /= s;
  w1 /= s;
  const double p0 = p_plus(n, theta0), p1 = p_plus(n, theta1);
  double err = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double l0 = 1.0, l1 = 1.0;
    for (int b = 0; b < m; ++b) {
      const bool plus = mask >> b & 1u;
      l0 *= plus ? p0 : 1.0 - p0;
      l1 *= plus ? p1 : 1.0 - p1;
    }
    const bool choose1 = w1 * l1 >= w0 * l0;
    err += choose1 ? w0 * l0 : w1 * l1;
  }
  return err;
}

/// 3x3 inverse by the adjugate formula, row-major.
inline std::vector<double> adjugate_inverse(const std::vector<double>& a) {
  auto at = [&](int i, int j) { return a[3 * i + j]; };
  std::vector<double> c(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      c[3 * i + j] = at(r0, c0) * at(r1, c1) - at(r0, c1) * at(r1, c0);
    }
  const double det = at(0, 0) * c[0] + at(0, 1) * c[1] + at(0, 2) * c[2];
  std::vector<double> inv(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) inv[3 * i + j] = c[3 * j + i] / det;
  return inv;
}

// Matched-prior Bayes risk as a double integral over the joint density,
// int dtheta0 p(theta0) sum_k P(k|theta0) (theta_BL(k) - theta0)^2, with the
// posterior means from plain weighted sums on the same node set.
inline double joint_bayes_risk(const std::function<double(double)>& prior, int n, int m,
                               const std::vector<double>& nodes, const std::vector<double>& w) {
  std::vector<double> mean(m + 1);
  for (int k = 0; k <= m; ++k) {
    double z = 0.0, t = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double q = w[i] * prior(nodes[i]) * binomial_pmf(n, nodes[i], m, k);
      z += q;
      t += q * nodes[i];
    }
    mean[k] = t / z;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double inner = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double d = mean[k] - nodes[i];
      inner += binomial_pmf(n, nodes[i], m, k) * d * d;
    }
    total += w[i] * prior(nodes[i]) * inner;
  }
  return total;
}

/// Simpson nodes and weights on [lo, hi] with n (odd) points.
inline void simpson_rule(double lo, double hi, int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    x[i] = lo + i * h;
    w[i] = h / 3.0 * (i == 0 || i == n - 1 ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
}

/// Power series of I0, independent of the library's own series routine.
inline double i0_series(double x) {
  double term = 1.0, sum = 1.0;
  const double q = 0.25 * x * x;
  for (int k = 1; k < 500; ++k) {
    term *= q / (double(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

}  // namespace oracle
