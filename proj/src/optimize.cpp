#include "phasebound/optimize.hpp"

#include <cmath>
#include <limits>

#include "phasebound/errors.hpp"

namespace phasebound {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double finite_or_lowest(double v) { return std::isfinite(v) ? v : kNegInf; }

}  // namespace

std::vector<double> uniform_points(double lo, double hi, int n) {
  if (n < 2) throw DomainError("uniform_points needs at least two points");
  std::vector<double> pts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    pts[static_cast<std::size_t>(i)] = (i == n - 1) ? hi : lo + (hi - lo) * t;
  }
  return pts;
}

Maximum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                           double width) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = finite_or_lowest(f(c));
  double fd = finite_or_lowest(f(d));
  int evals = 2;
  Maximum best{fc >= fd ? c : d, std::max(fc, fd), 0};
  while (std::abs(b - a) > width && evals < 400) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = finite_or_lowest(f(c));
      if (fc > best.value) best = {c, fc, 0};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = finite_or_lowest(f(d));
      if (fd > best.value) best = {d, fd, 0};
    }
    ++evals;
  }
  best.evaluations = evals;
  return best;
}

Maximum maximize_1d(const std::function<double(double)>& f, double lo, double hi,
                    const SearchOptions& options) {
  if (!(lo < hi)) throw DomainError("maximize_1d needs lo < hi");
  const auto xs = uniform_points(lo, hi, options.coarse_points);
  const auto ys = map_indexed(xs.size(), [&](std::size_t i) { return f(xs[i]); }, options.exec);

  std::size_t best = xs.size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(ys[i])) continue;
    if (best == xs.size() || ys[i] > ys[best]) best = i;
  }
  if (best == xs.size()) throw NumericalError("maximize_1d: no finite value on the coarse grid");

  Maximum result{xs[best], ys[best], static_cast<int>(xs.size())};
  const double left = xs[best == 0 ? 0 : best - 1];
  const double right = xs[best + 1 == xs.size() ? best : best + 1];
  const double width = options.refine_rel_width * (hi - lo);
  if (right > left) {
    const auto refined = golden_section_max(f, left, right, width);
    result.evaluations += refined.evaluations;
    if (refined.value > result.value) {
      result.arg = refined.arg;
      result.value = refined.value;
    }
  }
  return result;
}

}  // namespace phasebound
