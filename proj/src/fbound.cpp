#include "phasebound/fbound.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "phasebound/engine.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/linalg.hpp"
#include "phasebound/optimize.hpp"

namespace phasebound {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// log|1 + y|
double log_abs_1p(double y) { return y > -0.5 ? std::log1p(y) : std::log(std::abs(1.0 + y)); }

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

// Numerator contribution <est>(theta0 + lambda) - <est>(theta0).
double shift_of(double theta0, double lambda, const FrequentistOptions& o) {
  if (!o.mean_function) return lambda;
  return o.mean_function(theta0 + lambda) - o.mean_function(theta0);
}

double lambda_zero_limit(double theta0, int m, const GhzParityModel& model,
                         const FrequentistOptions& o) {
  const double f = model.fisher_information(theta0);
  if (!o.mean_function) return 1.0 / (m * f);
  if (std::isfinite(o.bias_derivative)) return o.bias_derivative * o.bias_derivative / (m * f);
  return kNaN;
}

// max over A of (c1 + A c2)^2 / (S11 + 2 A S12 + A^2 S22); the stationary A in closed form.
double best_over_a(double c1, double c2, double s11, double s12, double s22, double* a_out) {
  const double det = s11 * s22 - s12 * s12;
  if (!(s11 > 0.0) || !(det > 0.0) || !std::isfinite(det)) return kNaN;
  const double den = c1 * s22 - c2 * s12;
  double a, value;
  if (den == 0.0) {
    a = std::numeric_limits<double>::infinity();
    value = c2 * c2 / s22;
  } else {
    a = (c2 * s11 - c1 * s12) / den;
    value = (c1 + a * c2) * (c1 + a * c2) / (s11 + 2.0 * a * s12 + a * a * s22);
  }
  if (a_out) *a_out = a;
  return std::isfinite(value) ? value : kNaN;
}

struct Offset {
  double lambda = 0.0;
  std::vector<double> v;  // empty when the support condition fails
  double shift = 0.0;
  double norm2 = 0.0;
  bool ok() const { return !v.empty() && norm2 > 0.0 && std::isfinite(norm2); }
};

Offset make_offset(double theta0, int m, const GhzParityModel& model, double lambda,
                   const FrequentistOptions& o) {
  Offset off;
  off.lambda = lambda;
  if (!o.domain.contains(theta0 + lambda) || std::abs(lambda) < o.tol.min_test_point_gap)
    return off;
  off.v = weighted_ratio_deviation(model, theta0, theta0 + lambda, m);
  if (off.v.empty()) return off;
  off.norm2 = dot(off.v, off.v);
  off.shift = shift_of(theta0, lambda, o);
  return off;
}

double pair_value(const Offset& p, const Offset& q, double* a_out) {
  if (!p.ok() || !q.ok()) return kNaN;
  return best_over_a(p.shift, q.shift, p.norm2, dot(p.v, q.v), q.norm2 + 1.0, a_out);
}

}  // namespace

BoundReport crlb(double theta0, int m, const GhzParityModel& model, double bias_derivative) {
  if (m < 1) throw DomainError("crlb needs m >= 1");
  const double f = model.fisher_information(theta0);
  if (!(f > 0.0)) throw NumericalError("crlb: Fisher information is zero");
  return {"CRLB", bias_derivative * bias_derivative / (m * f), {}, kNaN, 1};
}

std::vector<double> weighted_ratio_deviation(const GhzParityModel& model, double theta0,
                                             double theta, int m) {
  const auto log_p0 = log_tally_pmf(model, theta0, m);
  const double x0 = model.half_angle(theta0);
  const double delta = model.half_angle(theta - theta0);
  const double c0 = std::cos(x0), s0 = std::sin(x0);
  const double hs = std::sin(0.5 * delta);
  const double sd = std::sin(delta);
  // log of p+(theta)/p+(theta0) and p-(theta)/p-(theta0), via the angle-addition
  // forms cos(x0+d)/cos x0 = 1 - 2 sin^2(d/2) - tan x0 sin d (and the sine analogue)
  const double lr_plus = c0 != 0.0 ? 2.0 * log_abs_1p(-2.0 * hs * hs - (s0 / c0) * sd) : kNaN;
  const double lr_minus = s0 != 0.0 ? 2.0 * log_abs_1p(-2.0 * hs * hs + (c0 / s0) * sd) : kNaN;

  std::vector<double> out(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<double> log_p;  // only needed when theta0 excludes some tallies
  for (int k = 0; k <= m; ++k) {
    const double lp0 = log_p0[static_cast<std::size_t>(k)];
    if (!std::isfinite(lp0)) {
      if (log_p.empty()) log_p = log_tally_pmf(model, theta, m);
      if (std::isfinite(log_p[static_cast<std::size_t>(k)])) return {};
      continue;
    }
    const int j = m - k;
    const double ell = (k > 0 ? k * lr_plus : 0.0) + (j > 0 ? j * lr_minus : 0.0);
    double v;
    if (ell <= 1.0) {
      v = std::expm1(ell) * std::exp(0.5 * lp0);
    } else {
      v = std::exp(0.5 * lp0 + ell + std::log1p(-std::exp(-ell)));
    }
    out[static_cast<std::size_t>(k)] = v;
  }
  return out;
}

double chrb_objective(double theta0, int m, const GhzParityModel& model, double lambda,
                      const FrequentistOptions& options) {
  const Offset off = make_offset(theta0, m, model, lambda, options);
  if (!off.ok()) return kNaN;
  const double v = off.shift * off.shift / off.norm2;
  return std::isfinite(v) ? v : kNaN;
}

BoundReport chrb(double theta0, int m, const GhzParityModel& model,
                 const FrequentistOptions& options) {
  if (m < 1) throw DomainError("chrb needs m >= 1");
  if (!options.domain.contains(theta0)) throw DomainError("theta0 outside the domain");
  const double lo = options.domain.a - theta0, hi = options.domain.b - theta0;
  SearchOptions so;
  so.coarse_points = options.tol.chrb_coarse_points;
  so.refine_rel_width = options.tol.refine_rel_width;
  so.exec = options.exec;
  const auto best = maximize_1d(
      [&](double lambda) { return chrb_objective(theta0, m, model, lambda, options); }, lo, hi, so);
  BoundReport r{"ChRB", best.value, {best.arg}, kNaN, best.evaluations};
  const double limit = lambda_zero_limit(theta0, m, model, options);
  if (std::isfinite(limit) && limit > r.value) {
    r.value = limit;
    r.argmax = {0.0};
  }
  return r;
}

double echrb_objective(double theta0, int m, const GhzParityModel& model, double lambda1,
                       double lambda2, const FrequentistOptions& options, double* best_a) {
  if (std::abs(lambda1 - lambda2) < options.tol.min_test_point_gap) return kNaN;
  const Offset p = make_offset(theta0, m, model, lambda1, options);
  const Offset q = make_offset(theta0, m, model, lambda2, options);
  return pair_value(p, q, best_a);
}

std::vector<double> echrb_axis(double lo, double hi, int resolution) {
  if (resolution < 1) throw DomainError("extended-bound resolution must be >= 1");
  std::vector<double> axis;
  axis.reserve(static_cast<std::size_t>(resolution) + 2);
  axis.push_back(lo);
  for (int i = 0; i < resolution; ++i) axis.push_back(lo + (i + 1) * (hi - lo) / (resolution + 1));
  axis.push_back(hi);
  return axis;
}

namespace {

struct PairBest {
  double value = kNaN;
  double lambda1 = kNaN, lambda2 = kNaN, a = kNaN;
};

PairBest grid_search(double theta0, int m, const GhzParityModel& model,
                     const std::vector<double>& axis, const FrequentistOptions& o) {
  std::vector<Offset> offsets(axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i)
    offsets[i] = make_offset(theta0, m, model, axis[i], o);

  const auto rows = map_indexed<PairBest>(
      axis.size(),
      [&](std::size_t i) {
        PairBest best;
        for (std::size_t j = 0; j < axis.size(); ++j) {
          if (j == i || std::abs(axis[i] - axis[j]) < o.tol.min_test_point_gap) continue;
          double a;
          const double v = pair_value(offsets[i], offsets[j], &a);
          if (std::isfinite(v) && !(v <= best.value)) best = {v, axis[i], axis[j], a};
        }
        return best;
      },
      o.exec);
  PairBest best;
  for (const auto& r : rows)
    if (std::isfinite(r.value) && !(r.value <= best.value)) best = r;
  return best;
}

}  // namespace

BoundReport echrb_grid_max(double theta0, int m, const GhzParityModel& model, int resolution,
                           const FrequentistOptions& options) {
  if (m < 1) throw DomainError("echrb needs m >= 1");
  const auto axis = echrb_axis(options.domain.a - theta0, options.domain.b - theta0, resolution);
  const auto best = grid_search(theta0, m, model, axis, options);
  if (!std::isfinite(best.value)) throw NumericalError("extended bound: every grid cell is singular");
  const int n = static_cast<int>(axis.size());
  return {"EChRB", best.value, {best.lambda1, best.lambda2, best.a}, kNaN, n * (n - 1)};
}

BoundReport echrb(double theta0, int m, const GhzParityModel& model,
                  const FrequentistOptions& options, const BoundReport* chrb_hint) {
  if (m < 1) throw DomainError("echrb needs m >= 1");
  if (!options.domain.contains(theta0)) throw DomainError("theta0 outside the domain");
  const BoundReport base = chrb_hint ? *chrb_hint : chrb(theta0, m, model, options);
  const double lo = options.domain.a - theta0, hi = options.domain.b - theta0;
  auto axis = echrb_axis(lo, hi, options.tol.echrb_resolution);
  if (!base.argmax.empty() && std::abs(base.argmax[0]) >= options.tol.min_test_point_gap)
    axis.push_back(base.argmax[0]);

  PairBest best = grid_search(theta0, m, model, axis, options);
  int evaluations = static_cast<int>(axis.size() * (axis.size() - 1));

  if (std::isfinite(best.value)) {
    const double step = (hi - lo) / (options.tol.echrb_resolution + 1);
    const double width = options.tol.refine_rel_width * (hi - lo);
    for (int pass = 0; pass < 4; ++pass) {
      bool improved = false;
      for (int coord = 0; coord < 2; ++coord) {
        double& x = coord == 0 ? best.lambda1 : best.lambda2;
        const double other = coord == 0 ? best.lambda2 : best.lambda1;
        auto f = [&](double t) {
          return coord == 0 ? echrb_objective(theta0, m, model, t, other, options)
                            : echrb_objective(theta0, m, model, other, t, options);
        };
        const auto g = golden_section_max(f, std::max(lo, x - step), std::min(hi, x + step), width);
        evaluations += g.evaluations;
        if (std::isfinite(g.value) && g.value > best.value) {
          x = g.arg;
          best.value = g.value;
          improved = true;
        }
      }
      if (!improved) break;
    }
    echrb_objective(theta0, m, model, best.lambda1, best.lambda2, options, &best.a);
  }

  BoundReport r{"EChRB", best.value, {best.lambda1, best.lambda2, best.a}, kNaN, evaluations};
  // A = 0 reduces the extended quotient to the Chapman-Robbins one.
  if (!std::isfinite(r.value) || base.value > r.value) {
    r.value = base.value;
    r.argmax = {base.argmax.empty() ? kNaN : base.argmax[0], best.lambda2, 0.0};
  }
  return r;
}

namespace {

struct PlacementValue {
  double value = kNaN;
  double condition = kNaN;
  std::vector<double> coefficients;
};

// d^T G^{-1} d after diagonal equilibration (the quadratic form is unchanged by it).
PlacementValue evaluate_placement(const std::vector<const Offset*>& pts,
                                  const FrequentistOptions& o) {
  const std::size_t n = pts.size();
  PlacementValue out;
  for (const auto* p : pts)
    if (!p->ok()) return out;
  SymmetricMatrix b(n);
  std::vector<double> d(n), scale(n);
  for (std::size_t i = 0; i < n; ++i) scale[i] = std::sqrt(pts[i]->norm2);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = pts[i]->shift / scale[i];
    b.set(i, i, 1.0);
    for (std::size_t j = i + 1; j < n; ++j)
      b.set(i, j, dot(pts[i]->v, pts[j]->v) / (scale[i] * scale[j]));
  }
  try {
    const auto sol = solve_spd(b, d, o.tol.max_condition, o.tol.ridge_scale, o.tol.ridge_rel_change);
    if (!std::isfinite(sol.quadratic_form) || sol.ridge_applied ||
        !(sol.condition <= o.tol.barankin_search_max_condition))
      return out;
    out.value = sol.quadratic_form;
    out.condition = sol.condition;
    out.coefficients.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.coefficients[i] = sol.coefficients[i] / scale[i];
  } catch (const NumericalError&) {
  }
  return out;
}

bool too_close(double lambda, const std::vector<const Offset*>& pts, std::size_t skip,
               double gap) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (i != skip && std::abs(pts[i]->lambda - lambda) < gap) return true;
  return false;
}

}  // namespace

BoundReport barankin_at(double theta0, int m, const GhzParityModel& model,
                        const BarankinConfig& config, const FrequentistOptions& options) {
  if (m < 1) throw DomainError("barankin needs m >= 1");
  const std::size_t n = config.test_points.size();
  if (n < 1 || n > 6) throw DomainError("barankin supports 1 to 6 test points");
  FrequentistOptions o = options;
  if (!config.unbiased) {
    if (!config.mean_function) throw DomainError("biased barankin needs a mean function");
    o.mean_function = config.mean_function;
  } else {
    o.mean_function = nullptr;
  }
  const double gap = o.tol.min_test_point_gap;
  std::vector<Offset> offsets;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = config.test_points[i];
    if (!o.domain.contains(t)) throw DomainError("test point outside the domain");
    if (std::abs(t - theta0) < gap) throw DomainError("test point coincides with theta0");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(t - config.test_points[j]) < gap) throw DomainError("test points not distinct");
    offsets.push_back(make_offset(theta0, m, model, t - theta0, o));
    if (!offsets.back().ok())
      throw NumericalError("likelihood ratio undefined or degenerate at a test point");
  }
  std::vector<const Offset*> pts;
  for (const auto& off : offsets) pts.push_back(&off);

  // Same linear algebra as the search, but errors surface here.
  SymmetricMatrix b(n);
  std::vector<double> d(n), scale(n);
  for (std::size_t i = 0; i < n; ++i) scale[i] = std::sqrt(pts[i]->norm2);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = pts[i]->shift / scale[i];
    b.set(i, i, 1.0);
    for (std::size_t j = i + 1; j < n; ++j)
      b.set(i, j, dot(pts[i]->v, pts[j]->v) / (scale[i] * scale[j]));
  }
  const auto sol = solve_spd(b, d, o.tol.max_condition, o.tol.ridge_scale, o.tol.ridge_rel_change);
  BoundReport r{"BB", sol.quadratic_form, config.test_points, sol.condition, 1};
  for (std::size_t i = 0; i < n; ++i) r.argmax.push_back(sol.coefficients[i] / scale[i]);
  return r;
}

BoundReport barankin(double theta0, int m, const GhzParityModel& model,
                     const FrequentistOptions& options, const BoundReport* echrb_hint,
                     const BoundReport* chrb_hint) {
  if (m < 1) throw DomainError("barankin needs m >= 1");
  const auto& tol = options.tol;
  const BoundReport ch = chrb_hint ? *chrb_hint : chrb(theta0, m, model, options);
  const BoundReport ex = echrb_hint ? *echrb_hint : echrb(theta0, m, model, options, &ch);

  // The extended quotient is itself a Barankin quotient (points theta0+l1, theta0+l2,
  // theta0 with coefficients 1, A, -1), so it is the floor of the estimate.
  BoundReport best{"BB", ex.value, {}, kNaN, 0};
  if (ex.argmax.size() == 3) {
    best.argmax = {theta0 + ex.argmax[0], theta0 + ex.argmax[1], theta0, 1.0, ex.argmax[2], -1.0};
  }
  if (ch.value > best.value) {
    best.value = ch.value;
    best.argmax = {theta0 + ch.argmax[0], theta0, 1.0, -1.0};
  }

  const double lo = options.domain.a - theta0, hi = options.domain.b - theta0;
  const double gap = tol.min_test_point_gap;
  const std::size_t target =
      static_cast<std::size_t>(std::min(tol.barankin_max_points, m));

  std::vector<Offset> coarse;
  for (double l : uniform_points(lo, hi, tol.barankin_coarse_points)) {
    Offset off = make_offset(theta0, m, model, l, options);
    if (off.ok()) coarse.push_back(std::move(off));
  }
  const double step = (hi - lo) / (tol.barankin_coarse_points - 1);
  const double width = tol.refine_rel_width * (hi - lo);

  auto consider = [&](const std::vector<const Offset*>& pts, const PlacementValue& pv) {
    if (!(pv.value > best.value)) return;
    best.value = pv.value;
    best.condition = pv.condition;
    best.argmax.clear();
    for (const auto* p : pts) best.argmax.push_back(theta0 + p->lambda);
    for (double c : pv.coefficients) best.argmax.push_back(c);
  };

  std::vector<std::vector<double>> starts;
  if (ex.argmax.size() == 3 && std::isfinite(ex.argmax[0]) && std::isfinite(ex.argmax[1]))
    starts.push_back({ex.argmax[0], ex.argmax[1]});
  if (!ch.argmax.empty()) starts.push_back({ch.argmax[0]});

  int evaluations = 0;
  for (const auto& start : starts) {
    // Refined points own their storage; coarse ones are shared.
    std::vector<std::unique_ptr<Offset>> owned;
    std::vector<const Offset*> pts;
    for (double l : start) {
      if (pts.size() >= target || too_close(l, pts, pts.size(), gap)) continue;
      owned.push_back(std::make_unique<Offset>(make_offset(theta0, m, model, l, options)));
      if (owned.back()->ok()) pts.push_back(owned.back().get());
    }
    PlacementValue current = pts.empty() ? PlacementValue{} : evaluate_placement(pts, options);
    ++evaluations;
    while (!pts.empty() && !std::isfinite(current.value)) {
      pts.pop_back();
      current = pts.empty() ? PlacementValue{} : evaluate_placement(pts, options);
    }
    if (pts.empty()) continue;
    consider(pts, current);

    // Scan the coarse candidates for slot `slot` (slot == size appends).
    auto scan = [&](std::size_t slot) {
      const auto vals = map_indexed<PlacementValue>(
          coarse.size(),
          [&](std::size_t c) {
            if (too_close(coarse[c].lambda, pts, slot, gap)) return PlacementValue{};
            auto trial = pts;
            if (slot == trial.size()) trial.push_back(&coarse[c]);
            else trial[slot] = &coarse[c];
            return evaluate_placement(trial, options);
          },
          options.exec);
      evaluations += static_cast<int>(coarse.size());
      std::size_t arg = coarse.size();
      for (std::size_t c = 0; c < vals.size(); ++c)
        if (std::isfinite(vals[c].value) && (arg == coarse.size() || vals[c].value > vals[arg].value))
          arg = c;
      return std::make_pair(arg, arg < vals.size() ? vals[arg] : PlacementValue{});
    };

    while (pts.size() < target) {
      auto [arg, pv] = scan(pts.size());
      if (arg == coarse.size()) break;
      pts.push_back(&coarse[arg]);
      current = pv;
      consider(pts, current);
    }

    for (int sweep = 0; sweep < tol.barankin_sweeps; ++sweep) {
      bool improved = false;
      for (std::size_t slot = 0; slot < pts.size(); ++slot) {
        auto [arg, pv] = scan(slot);
        if (arg < coarse.size() && pv.value > current.value) {
          pts[slot] = &coarse[arg];
          current = pv;
          improved = true;
          consider(pts, current);
        }
        const double x = pts[slot]->lambda;
        auto f = [&](double l) {
          if (too_close(l, pts, slot, gap)) return kNaN;
          const Offset off = make_offset(theta0, m, model, l, options);
          auto trial = pts;
          trial[slot] = &off;
          return evaluate_placement(trial, options).value;
        };
        const auto g = golden_section_max(f, std::max(lo, x - step), std::min(hi, x + step), width);
        evaluations += g.evaluations;
        if (std::isfinite(g.value) && g.value > current.value) {
          owned.push_back(std::make_unique<Offset>(make_offset(theta0, m, model, g.arg, options)));
          auto trial = pts;
          trial[slot] = owned.back().get();
          const auto pv2 = evaluate_placement(trial, options);
          if (pv2.value > current.value) {
            pts = trial;
            current = pv2;
            improved = true;
            consider(pts, current);
          }
        }
      }
      if (!improved) break;
    }
  }
  best.evaluations = evaluations;
  return best;
}

void check_chain(const std::vector<BoundReport>& ordered, double slack) {
  for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
    const auto& hi = ordered[i];
    const auto& lo = ordered[i + 1];
    if (!(hi.value >= lo.value - slack)) {
      std::ostringstream os;
      os.precision(17);
      os << "bound hierarchy violated: " << hi.name << " = " << hi.value << " < " << lo.name
         << " = " << lo.value;
      throw HierarchyViolation(os.str(), hi.name, lo.name);
    }
  }
}

std::vector<BoundReport> hierarchy_report(double theta0, int m, const GhzParityModel& model,
                                          const FrequentistOptions& options) {
  const double slope = options.mean_function ? options.bias_derivative : 1.0;
  if (!std::isfinite(slope))
    throw DomainError("biased hierarchy needs the bias derivative for the CRLB");
  auto cr = crlb(theta0, m, model, slope);
  auto ch = chrb(theta0, m, model, options);
  auto ex = echrb(theta0, m, model, options, &ch);
  auto bb = barankin(theta0, m, model, options, &ex, &ch);
  std::vector<BoundReport> out{bb, ex, ch, cr};
  check_chain(out, options.tol.hierarchy_slack);
  return out;
}

}  // namespace phasebound
