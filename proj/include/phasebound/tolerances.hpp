#pragma once

namespace phasebound {

// Every grid size and threshold used by the library lives here.
struct Tolerances {
  int posterior_nodes = 2001;    // Simpson nodes for posteriors and Bayesian integrals
  int outer_nodes = 201;         // Simpson nodes for averages over a fluctuating theta0
  int zzb_nodes = 201;           // per axis of the Ziv-Zakai double integral
  int chrb_coarse_points = 401;  // coarse grid of the Chapman-Robbins offset search
  int echrb_resolution = 101;    // interior points per axis of the extended search grid
  int barankin_coarse_points = 101;
  int barankin_max_points = 6;
  int barankin_sweeps = 8;
  double barankin_search_max_condition = 1e10;  // placements above this are skipped by the search
  double refine_rel_width = 1e-10;   // golden-section stop width, relative to the interval
  double ridge_scale = 1e-12;        // ridge = ridge_scale * trace / n
  double max_condition = 1e12;       // above this, solve_spd falls back to the ridge
  double ridge_rel_change = 1e-6;    // allowed relative change caused by the ridge
  double hierarchy_slack = 1e-9;     // bound chains may be violated by at most this much
  double min_test_point_gap = 1e-9;  // distinct test points / offsets
  int exact_binomial_max_m = 50;     // above this, binomial coefficients go through lgamma
  double zzb_tail_cut = 1e-16;       // h-range truncation for the Ziv-Zakai integral
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace phasebound
