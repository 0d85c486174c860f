#include "toepmax/sym_matrix.hpp"

#include <cmath>
#include <cstdlib>

#include "toepmax/errors.hpp"

namespace toepmax {

SymMatrix::SymMatrix(int n) : n_(n) {
  if (n < 1) throw InvalidInput("SymMatrix: order must be >= 1");
  tri_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
}

std::size_t SymMatrix::index(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw InvalidInput("SymMatrix: index out of range");
  if (i < j) std::swap(i, j);
  return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::from_dense(const Eigen::MatrixXd& m, double sym_tol) {
  if (m.rows() != m.cols()) throw InvalidInput("from_dense: matrix not square");
  const int n = static_cast<int>(m.rows());
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  SymMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > sym_tol * scale)
        throw InvalidInput("from_dense: matrix not symmetric");
      out.set(i, j, 0.5 * (m(i, j) + m(j, i)));
    }
  return out;
}

Eigen::MatrixXd SymMatrix::dense() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = (*this)(i, j);
  return m;
}

double SymMatrix::max_abs() const {
  double v = 0.0;
  for (double x : tri_) v = std::max(v, std::abs(x));
  return v;
}

bool SymMatrix::all_finite() const {
  for (double x : tri_)
    if (!std::isfinite(x)) return false;
  return true;
}

SymMatrix antidiagonal_reflect(const SymMatrix& m) {
  const int n = m.order();
  SymMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) out.set(i, j, m(n - 1 - i, n - 1 - j));
  return out;
}

}  // namespace toepmax
