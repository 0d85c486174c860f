#pragma once

#include <Eigen/Dense>
#include <vector>

#include "toepmax/sym_matrix.hpp"

namespace toepmax {

// Coefficients a_0, ..., a_{L-1} of a real polynomial of degree <= L-1.
// Matrix constructions below use L x L matrices.
struct PolyCoeffs {
  std::vector<double> c;

  int size() const { return static_cast<int>(c.size()); }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
};

// J^k for the lower shift matrix J (ones on the first subdiagonal):
// ones at (j+k, j), j = 0..n-k-1. Requires 0 <= k <= n; k = n gives 0.
Eigen::MatrixXd lower_shift_power(int n, int k);

// J^k (J^T)^l: ones on diagonal l-k, at (j+k, j+l) for
// j = 0..n-max(k,l)-1. Requires 0 <= k, l <= n; an exponent of n gives
// the zero matrix, matching J^n = 0.
Eigen::MatrixXd shift_product(int n, int k, int l);

// Gohberg-Semencul: given the first column a of T^{-1} for a symmetric PD
// Toeplitz T, reconstructs T^{-1} = (1/a_0)(A A^T - B^T B) with
// A = sum_j a_j J^j and B = sum_{j>=1} a_j (J^T)^{n-j}. Requires a_0 > 0.
SymMatrix gohberg_semencul_inverse(const PolyCoeffs& first_col);

// Schur-Cohn Bezoutian Bez(a) = A A^T - B^T B (same A, B as above). It is
// PD exactly when all roots of a_0 + a_1 z + ... lie outside the closed
// unit disk, and its inverse is then Toeplitz.
SymMatrix bezoutian(const PolyCoeffs& a);

struct RootLocation {
  bool all_outside = false;  // every root strictly outside the closed disk
  bool indeterminate = false;  // Bezoutian nearly singular; boolean untrusted
  double bez_min_eigenvalue = 0.0;
};

// Root location via positive definiteness of the Bezoutian; the
// indeterminate flag is raised when the smallest Bezoutian eigenvalue is
// within 1e-9 of zero. Throws on the zero polynomial. a_0 = 0 means z = 0
// is a root, hence all_outside = false.
RootLocation roots_outside_disk(const PolyCoeffs& a);

struct CycleData {
  double t0 = 0.0;
  double tk = 0.0;
  double tnk = 0.0;
};

struct StablePoly {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
};

// For the cycle pattern {k, n-k}: maps coefficients (p, q, r) of the
// stable polynomial p + q z^k + r z^{n-k} (all roots outside the closed
// disk, checked) to completable data, reading rows 1, k+1, n-k+1
// (1-based) of the first column of Bez^{-1}. Requires 1 <= k < n-k.
CycleData cycle_data_from_stable_poly(double p, double q, double r, int n,
                                      int k);

// Inverse map: runs the maxdet completion on the cycle instance
// (strict feasibility required) and reads f_0, f_k, f_{n-k} from the
// first column of the completion's inverse; returns
// (sqrt(f_0), f_k/sqrt(f_0), f_{n-k}/sqrt(f_0)).
StablePoly stable_poly_from_cycle_data(double t0, double tk, double tnk,
                                       int n, int k);

}  // namespace toepmax
