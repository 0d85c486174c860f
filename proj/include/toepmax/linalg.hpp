#pragma once

#include <Eigen/Dense>

namespace toepmax::linalg {

struct Cholesky {
  bool ok = false;
  Eigen::MatrixXd lower;  // valid only when ok
  double min_pivot = 0.0;
  double max_pivot = 0.0;
};

// Lower Cholesky factorization with an explicit pivot rule: a pivot below
// rel_tol * (largest diagonal entry of the input) counts as failure, so
// "is PD" means "Cholesky succeeded under this rule".
Cholesky try_cholesky(const Eigen::MatrixXd& a, double rel_tol = 1e-12);

bool is_positive_definite(const Eigen::MatrixXd& a, double rel_tol = 1e-12);

// Solves (L L^T) X = B given the lower factor.
Eigen::MatrixXd cholesky_solve(const Eigen::MatrixXd& lower,
                               const Eigen::MatrixXd& rhs);

// Symmetrized inverse from a lower Cholesky factor.
Eigen::MatrixXd inverse_from_cholesky(const Eigen::MatrixXd& lower);

// Inverse of a PD matrix; throws toepmax::InvalidInput when not PD.
Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a);

double logdet_from_cholesky(const Eigen::MatrixXd& lower);

// Eigenvalues in ascending order (self-adjoint solver).
Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& a);

struct RankDecision {
  int rank = 0;
  bool gap_ok = true;     // spectral gap between counted/discarded >= 1e3
  double lambda_max = 0;  // largest eigenvalue (0 for the zero matrix)
  double threshold = 0;   // cut actually applied
};

// Counts eigenvalues above max(n * 1e-10 * lambda_max, noise_floor), then
// requires the counted/discarded gap ratio to reach 1e3 (skipped when
// nothing is discarded or nothing counted). noise_floor lets callers fold
// in the accuracy of the matrix itself (e.g. an extrapolated limit).
RankDecision numerical_rank(const Eigen::VectorXd& eigenvalues_ascending,
                            double noise_floor = 0.0);

}  // namespace toepmax::linalg
