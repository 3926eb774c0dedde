#include "phasebound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "phasebound/errors.hpp"

namespace phasebound {

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

SymmetricEigen jacobi_eigen(const SymmetricMatrix& m) {
  const std::size_t n = m.size();
  std::vector<double> a(n * n), v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    v[i * n + i] = 1.0;
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  }
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      diag += at(i, i) * at(i, i);
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off <= 1e-32 * diag || off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (at(p, q) == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return at(x, x) < at(y, y); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = at(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = v[i * n + order[k]];
  }
  return out;
}

double condition_number(const SymmetricMatrix& m) {
  if (m.size() == 0) return 1.0;
  const auto eig = jacobi_eigen(m);
  const double lo = eig.values.front(), hi = eig.values.back();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

namespace {

// Returns the Cholesky solution, or nullopt if a pivot is not positive.
std::optional<std::vector<double>> cholesky_solve(const SymmetricMatrix& b,
                                                  std::span<const double> d, double shift) {
  const std::size_t n = b.size();
  std::vector<double> l(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = b(j, j) + shift;
    for (std::size_t k = 0; k < j; ++k) s -= l[j * n + k] * l[j * n + k];
    if (!(s > 0.0)) return std::nullopt;
    const double ljj = std::sqrt(s);
    l[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double t = b(i, j);
      for (std::size_t k = 0; k < j; ++k) t -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = t / ljj;
    }
  }
  std::vector<double> y(n), x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = d[i];
    for (std::size_t k = 0; k < i; ++k) t -= l[i * n + k] * y[k];
    y[i] = t / l[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double t = y[i];
    for (std::size_t k = i + 1; k < n; ++k) t -= l[k * n + i] * x[k];
    x[i] = t / l[i * n + i];
  }
  return x;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

SpdSolution solve_spd(const SymmetricMatrix& b, std::span<const double> d, double max_condition,
                      double ridge_scale, double ridge_rel_change) {
  const std::size_t n = b.size();
  if (n == 0 || n > 6) throw DomainError("solve_spd supports 1 <= n <= 6");
  if (d.size() != n) throw DomainError("solve_spd: right-hand side size mismatch");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!std::isfinite(b(i, j))) throw NumericalError("solve_spd: non-finite matrix entry");

  const double cond = condition_number(b);
  auto plain = cholesky_solve(b, d, 0.0);
  if (plain && cond <= max_condition) {
    const double form = dot(d, *plain);
    return {std::move(*plain), form, cond, false};
  }

  const double ridge = ridge_scale * b.trace() / static_cast<double>(n);
  auto ridged = cholesky_solve(b, d, ridge);
  if (!ridged) throw NotPositiveDefinite("solve_spd: matrix is indefinite beyond ridge repair");
  const double ridged_form = dot(d, *ridged);

  // Reference value for the change test: the unregularised solution, via the
  // eigen-decomposition when Cholesky already failed.
  double plain_form;
  if (plain) {
    plain_form = dot(d, *plain);
  } else {
    const auto eig = jacobi_eigen(b);
    if (eig.values.front() <= 0.0)
      throw IllConditioned("solve_spd: singular matrix, ridge changes the solution",
                           std::numeric_limits<double>::infinity(), ridged_form);
    plain_form = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += eig.vectors[i * n + k] * d[i];
      plain_form += proj * proj / eig.values[k];
    }
  }
  const double scale = std::max(std::abs(plain_form), std::numeric_limits<double>::min());
  if (std::abs(ridged_form - plain_form) / scale > ridge_rel_change)
    throw IllConditioned("solve_spd: ridge fallback changed the quadratic form", plain_form,
                         ridged_form);
  return {std::move(*ridged), ridged_form, cond, true};
}

}  // namespace phasebound
