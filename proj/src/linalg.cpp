#include "toepmax/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "toepmax/errors.hpp"

namespace toepmax::linalg {

Cholesky try_cholesky(const Eigen::MatrixXd& a, double rel_tol) {
  Cholesky res;
  const int n = static_cast<int>(a.rows());
  if (n == 0 || a.cols() != n) return res;

  const double max_diag = a.diagonal().maxCoeff();
  if (!(max_diag > 0.0) || !a.allFinite()) return res;
  const double pivot_floor = rel_tol * max_diag;

  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  double min_pivot = std::numeric_limits<double>::infinity();
  double max_pivot = 0.0;
  for (int j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (int k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > pivot_floor)) return res;  // also rejects NaN
    min_pivot = std::min(min_pivot, pivot);
    max_pivot = std::max(max_pivot, pivot);
    l(j, j) = std::sqrt(pivot);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  res.ok = true;
  res.lower = std::move(l);
  res.min_pivot = min_pivot;
  res.max_pivot = max_pivot;
  return res;
}

bool is_positive_definite(const Eigen::MatrixXd& a, double rel_tol) {
  return try_cholesky(a, rel_tol).ok;
}

Eigen::MatrixXd cholesky_solve(const Eigen::MatrixXd& lower,
                               const Eigen::MatrixXd& rhs) {
  Eigen::MatrixXd y =
      lower.triangularView<Eigen::Lower>().solve(rhs);
  return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::MatrixXd inverse_from_cholesky(const Eigen::MatrixXd& lower) {
  const int n = static_cast<int>(lower.rows());
  Eigen::MatrixXd inv = cholesky_solve(lower, Eigen::MatrixXd::Identity(n, n));
  return 0.5 * (inv + inv.transpose());
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a) {
  Cholesky c = try_cholesky(a);
  if (!c.ok) throw InvalidInput("spd_inverse: matrix is not positive definite");
  return inverse_from_cholesky(c.lower);
}

double logdet_from_cholesky(const Eigen::MatrixXd& lower) {
  double s = 0.0;
  for (int i = 0; i < lower.rows(); ++i) s += std::log(lower(i, i));
  return 2.0 * s;
}

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

RankDecision numerical_rank(const Eigen::VectorXd& eigs, double noise_floor) {
  RankDecision d;
  const int n = static_cast<int>(eigs.size());
  if (n == 0) return d;
  d.lambda_max = eigs(n - 1);
  if (!(d.lambda_max > 0.0)) {
    d.rank = 0;
    d.threshold = 0.0;
    return d;
  }
  d.threshold = std::max(n * 1e-10 * d.lambda_max, noise_floor);
  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (eigs(i) > d.threshold) ++rank;
  d.rank = rank;
  if (rank > 0 && rank < n) {
    // eigs ascending: last counted is eigs(n - rank), first discarded is
    // eigs(n - rank - 1).
    const double counted = eigs(n - rank);
    const double discarded =
        std::max(eigs(n - rank - 1), 1e-300);
    d.gap_ok = counted / discarded >= 1e3;
  }
  return d;
}

}  // namespace toepmax::linalg
