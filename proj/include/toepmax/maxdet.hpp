#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "toepmax/partial_toeplitz.hpp"
#include "toepmax/pattern.hpp"
#include "toepmax/sym_matrix.hpp"

namespace toepmax {

// Unspecified strictly-upper positions (i, j), i < j, |i-j| free, in
// lexicographic order. This is the solver's variable order: one scalar per
// unordered free pair.
std::vector<std::pair<int, int>> free_pairs(const Pattern& p);

enum class Feasibility { StrictlyFeasible, BoundaryOnly, Infeasible };

struct FeasibilityReport {
  Feasibility status = Feasibility::Infeasible;
  // Completion attaining lambda_min_achieved (always present; for
  // Infeasible it is the least-infeasible matrix found).
  SymMatrix witness;
  std::vector<double> witness_free;  // free entries of the witness
  double lambda_min_achieved = 0.0;
};

struct FeasibilityOptions {
  // Optional start for the free entries (default all zeros).
  std::optional<std::vector<double>> start;
  double mu_min_rel = 1e-13;  // barrier floor, relative to max(t0, 1)
  int max_newton = 2000;
};

// Phase I: maximizes the smallest eigenvalue of the completion over the
// free entries (a concave problem) by an interior-point ascent on
// max s + mu logdet(T(x) - sI), mu -> 0. Classifies with
// tol = 1e-9 * t0: lambda > tol strictly feasible, |lambda| <= tol
// boundary, lambda < -tol infeasible.
FeasibilityReport find_pd_completion(const PartialToeplitz& pt,
                                     const FeasibilityOptions& opts = {});

struct CompletionResult {
  SymMatrix completion;
  SymMatrix inverse;
  double certificate_residual = 0.0;  // max |inverse| over free positions
  double toeplitz_deviation = 0.0;
  double log_det = 0.0;
  int iterations = 0;

  // Diagnostics beyond the core contract.
  std::vector<double> free_values;      // solver variables, free_pairs order
  std::vector<double> objective_trace;  // logdet after each accepted step
  bool converged = true;                // false only under allow_stall
  double grad_norm = 0.0;               // final gradient max-norm
};

struct SolveOptions {
  double tol = 1e-10;  // gradient max-norm target
  int max_iterations = 200;
  // Warm start for the free entries; when feasible it skips Phase I.
  std::optional<std::vector<double>> warm_start;
  // Accept a line-search stall as best-effort convergence instead of
  // raising MaxIterations (used by path followers near singular limits).
  bool allow_stall = false;
};

// Maximum-determinant PD completion by Newton's method on the free
// entries: gradient 2*(T^{-1})_ij, exact logdet Hessian, backtracking line
// search (halve until Cholesky succeeds and Armijo holds), Barzilai-Borwein
// gradient fallback when the Newton system is ill-conditioned (cond >
// 1e12). At the optimum the inverse vanishes on every free position; that
// certificate residual is reported. Requires strict feasibility.
CompletionResult maxdet_complete(const PartialToeplitz& pt,
                                 const SolveOptions& opts = {});
CompletionResult maxdet_complete(const PartialToeplitz& pt, double tol);

// (is Toeplitz within tol, max over diagonals of (max - min) entry).
// The boolean is deviation <= tol * (1 + max |entry|).
std::pair<bool, double> is_toeplitz(const SymMatrix& m, double tol = 1e-9);

// Fast path for P1/P2: solves one representative block per distinct block
// size of the residue-class decomposition, replicates, and assembles the
// permuted block-diagonal completion (exact zeros across blocks). The
// result is Toeplitz and matches the generic solver.
CompletionResult structured_complete(const PartialToeplitz& pt,
                                     const PatternClass& cls);

}  // namespace toepmax
