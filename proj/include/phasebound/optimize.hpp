#pragma once

#include <functional>
#include <vector>

#include "phasebound/parallel.hpp"

namespace phasebound {

struct Maximum {
  double arg;
  double value;
  int evaluations;
};

struct SearchOptions {
  int coarse_points = 401;
  double refine_rel_width = 1e-10;  // golden-section stop width relative to |hi - lo|
  Exec exec = Exec::serial;         // coarse grid only; the refinement is sequential
};

// Coarse uniform scan over [lo, hi] (endpoints included), then golden-section
// refinement on the two cells around the best node. Non-finite values count as
// excluded points. Ties go to the smallest abscissa. The returned value is never
// below the coarse maximum. Throws NumericalError when every coarse value is excluded.
Maximum maximize_1d(const std::function<double(double)>& f, double lo, double hi,
                    const SearchOptions& options = {});

/// Golden-section maximisation of a (locally unimodal) f on [lo, hi]; non-finite values lose.
Maximum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                           double width);

/// n points spread uniformly over [lo, hi] with both endpoints exact.
std::vector<double> uniform_points(double lo, double hi, int n);

}  // namespace phasebound
