#pragma once

#include <Eigen/Dense>
#include <vector>

namespace toepmax {

/**
 * Dense real symmetric matrix.
 *
 * Stores the lower triangle packed row-major, so symmetry holds by
 * construction: (i, j) and (j, i) address the same element. Indices are
 * 0-based.
 */
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n);

  static SymMatrix identity(int n);

  // Requires m square and symmetric up to sym_tol * (1 + max |entry|);
  // off-triangle pairs are averaged.
  static SymMatrix from_dense(const Eigen::MatrixXd& m, double sym_tol = 1e-9);

  int order() const { return n_; }

  double operator()(int i, int j) const { return tri_[index(i, j)]; }
  void set(int i, int j, double v) { tri_[index(i, j)] = v; }

  Eigen::MatrixXd dense() const;
  double max_abs() const;
  bool all_finite() const;

  bool operator==(const SymMatrix& other) const = default;

 private:
  std::size_t index(int i, int j) const;

  int n_ = 0;
  std::vector<double> tri_;
};

// Conjugation by the order-reversing permutation:
// out(i, j) = in(n-1-i, n-1-j). An involution; fixes every symmetric
// Toeplitz matrix exactly (entries are moved, never recomputed).
SymMatrix antidiagonal_reflect(const SymMatrix& m);

}  // namespace toepmax
