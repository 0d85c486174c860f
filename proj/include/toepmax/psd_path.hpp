#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "toepmax/maxdet.hpp"
#include "toepmax/partial_toeplitz.hpp"
#include "toepmax/sym_matrix.hpp"

namespace toepmax {

// One point of the regularized central path: the maxdet completion of the
// instance with diagonal t0 + alpha. Requires alpha > 0 and strict
// feasibility of the shifted instance.
CompletionResult path_point(const PartialToeplitz& pt, double alpha,
                            double tol = 1e-10);

struct PathOptions {
  double alpha0 = 1.0;
  double rho = 0.5;          // geometric decrease factor, in (0, 1)
  double alpha_min = 1e-8;   // schedule stops once alpha would drop below
  double solve_tol = 1e-10;  // per-point gradient tolerance
};

struct PathLimit {
  SymMatrix limit_completion;  // alpha -> 0 limit of the completions
  SymMatrix exposing;          // limit of alpha * X(alpha)^{-1}
  int completion_rank = 0;
  int exposing_rank = 0;
  bool rank_gaps_ok = true;          // both spectral-gap checks passed
  double complementarity_residual = 0.0;  // max-norm of X Z
  double support_residual = 0.0;  // max |Z| outside specified diagonals
  double extrapolation_residual = 0.0;  // window-consistency estimate
  bool extrapolated = true;  // false when validation fell back to the raw
                             // final iterate
  // (alpha, free entries) per solved point, outermost first.
  std::vector<std::pair<double, std::vector<double>>> alpha_trace;
};

// Follows the path along the geometric alpha schedule with warm-started
// (predictor-corrector) solves, then extrapolates both the completion and
// the scaled inverse to alpha = 0 by iterated per-component Aitken
// acceleration. The window whose accelerated value agrees best with its
// shifted copy wins, which keeps the tail solve noise out of the limit;
// agreement above 1e-4 falls back to the raw final iterate. Specified
// entries of the limit are the exact data. Requires the instance to be
// PSD-completable.
PathLimit path_limit(const PartialToeplitz& pt, const PathOptions& opts = {});

// Maximum-rank PSD completion for the P1/P2/P3 families: the maxdet
// completion when strictly feasible, otherwise the path limit. The result
// is Toeplitz (asserted at 1e-6).
SymMatrix max_rank_psd_complete(const PartialToeplitz& pt);

// Staged Toeplitz PSD completion for the relaxed families. Stage 1:
// complete the leading principal submatrix of order (r+1)k (P2') or k+r
// (P3') through its exact family. Stage 2: copy the resulting diagonal
// values, yielding a banded instance with pattern {1, ..., order-1}.
// Stage 3: complete that banded instance. Matches the original data
// exactly; PSD within 1e-8; Toeplitz within 1e-6.
SymMatrix complete_relaxed(const PartialToeplitz& pt, const PatternClass& cls);

enum class SdVerdict { SlaterHolds, SdOne, SdAtLeastTwo, Inconclusive };

struct SdProbe {
  SdVerdict verdict = SdVerdict::Inconclusive;
  int completion_rank = 0;
  int exposing_rank = 0;
  // Max rank achievable by a PSD exposing candidate supported on the
  // specified diagonals (kernel-dyad test); set only when that test ran.
  std::optional<int> exposing_rank_bound;
  double support_residual = 0.0;
  double complementarity_residual = 0.0;
};

// Singularity-degree probe for the cycle family {k, n-k}: SlaterHolds when
// strictly feasible; otherwise classifies from the path limit's ranks.
// rank_x + rank_z = n with Z != 0 certifies degree 1; rank_z <= 1 with a
// two-dimensional completion kernel triggers the kernel-dyad test, which
// certifies degree >= 2 when no PSD combination of kernel dyads supported
// on the specified diagonals reaches rank 2. Anything unverified is
// Inconclusive. Non-cycle patterns: SlaterHolds if strictly feasible, else
// Inconclusive with ranks reported.
SdProbe sd_probe(const PartialToeplitz& pt);

// Inverse of a PD Toeplitz matrix whose inverse is supported on the first
// row/column, the three central diagonals and the corners:
// diag (a, b, ..., b, a), first off-diagonal c, corner d, zeros elsewhere,
// with a b = a^2 + c^2 - d^2. Template and relation checked at 1e-8
// relative; violations throw StructureViolation. Requires n >= 3.
struct CycleInverseForm {
  double corner_diag = 0.0;    // a
  double interior_diag = 0.0;  // b
  double band = 0.0;           // c
  double corner = 0.0;         // d
};

CycleInverseForm cycle_inverse_form(const SymMatrix& t, double tol = 1e-8);

// The moment matrix [cos((i-j) theta)], the unique PSD completion of the
// cycle instance {1, n-1} with data (1, cos theta, cos((n-1) theta)) for
// 0 <= theta <= pi/(n-1). Rank 2 (rank 1 at theta = 0).
SymMatrix cosine_matrix(int n, double theta);

// Probes the exposing-vector structure of the cycle instance {1, n-1},
// data (1, cos(pi/(n-1)), -1): the limit exposing vector is expected to be
// rank 1 with corner entries (n-1)/4 and vanishing interior diagonal.
struct ExposingCheck {
  int n = 0;
  SdVerdict verdict = SdVerdict::Inconclusive;
  int completion_rank = 0;
  int exposing_rank = 0;
  double interior_abs = 0.0;  // |interior diagonal entry| of the exposing
  double corner_11 = 0.0;
  double corner_nn = 0.0;
  double corner_1n = 0.0;
  double expected_corner = 0.0;  // (n-1)/4
  double corner_max_err = 0.0;
  bool corners_agree = false;  // within 1e-3 of (n-1)/4
};

ExposingCheck probe_cycle_exposing(int n);

}  // namespace toepmax
