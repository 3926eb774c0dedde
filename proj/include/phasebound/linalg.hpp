#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace phasebound {

// Dense symmetric matrix for the small Gram systems behind the Barankin family.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  /// Writes both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) {
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }
  double trace() const;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

struct SymmetricEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column k is the eigenvector of values[k], row-major n x n
};

/// Cyclic Jacobi rotations; exact enough for n <= 6.
SymmetricEigen jacobi_eigen(const SymmetricMatrix& m);

/// Ratio of extreme eigenvalues; +inf when the smallest is <= 0.
double condition_number(const SymmetricMatrix& m);

struct SpdSolution {
  std::vector<double> coefficients;  // a with B a = d
  double quadratic_form;             // d^T a
  double condition;
  bool ridge_applied;
};

// Cholesky solve of B a = d for n <= 6. When cond(B) exceeds max_condition the
// system is re-solved with B + r I, r = ridge_scale * trace(B) / n. Throws
// IllConditioned if that moves d^T a by more than ridge_rel_change (relative),
// NotPositiveDefinite if even the ridged matrix has no Cholesky factor.
SpdSolution solve_spd(const SymmetricMatrix& b, std::span<const double> d,
                      double max_condition = 1e12, double ridge_scale = 1e-12,
                      double ridge_rel_change = 1e-6);

}  // namespace phasebound
