#include "toepmax/toeplitz_algebra.hpp"

#include <cmath>

#include "toepmax/errors.hpp"
#include "toepmax/linalg.hpp"
#include "toepmax/maxdet.hpp"

namespace toepmax {

Eigen::MatrixXd lower_shift_power(int n, int k) {
  if (n < 1 || k < 0 || k > n)
    throw InvalidInput("lower_shift_power: need n >= 1 and 0 <= k <= n");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j + k < n; ++j) m(j + k, j) = 1.0;
  return m;
}

Eigen::MatrixXd shift_product(int n, int k, int l) {
  if (n < 1 || k < 0 || l < 0 || k > n || l > n)
    throw InvalidInput("shift_product: need 0 <= k, l <= n");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j + std::max(k, l) < n; ++j) m(j + k, j + l) = 1.0;
  return m;
}

namespace {

// A = sum_j a_j J^j (lower triangular Toeplitz with first column a) and
// B = sum_{j>=1} a_j (J^T)^{L-j}.
void build_generators(const PolyCoeffs& a, Eigen::MatrixXd& A,
                      Eigen::MatrixXd& B) {
  const int L = a.size();
  A = Eigen::MatrixXd::Zero(L, L);
  B = Eigen::MatrixXd::Zero(L, L);
  for (int j = 0; j < L; ++j) {
    if (a[j] == 0.0) continue;
    for (int i = 0; i + j < L; ++i) A(i + j, i) += a[j];
    if (j >= 1)
      for (int i = 0; i + (L - j) < L; ++i) B(i, i + (L - j)) += a[j];
  }
}

SymMatrix bezoutian_dense(const PolyCoeffs& a) {
  if (a.size() < 1) throw InvalidInput("bezoutian: empty coefficient vector");
  Eigen::MatrixXd A, B;
  build_generators(a, A, B);
  const Eigen::MatrixXd bez =
      A * A.transpose() - B.transpose() * B;
  return SymMatrix::from_dense(bez);
}

}  // namespace

SymMatrix bezoutian(const PolyCoeffs& a) { return bezoutian_dense(a); }

SymMatrix gohberg_semencul_inverse(const PolyCoeffs& first_col) {
  if (first_col.size() < 1)
    throw InvalidInput("gohberg_semencul_inverse: empty column");
  if (!(first_col[0] > 0.0))
    throw InvalidInput("gohberg_semencul_inverse: leading entry must be > 0");
  SymMatrix bez = bezoutian_dense(first_col);
  const int n = bez.order();
  SymMatrix out(n);
  const double inv_a0 = 1.0 / first_col[0];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) out.set(i, j, inv_a0 * bez(i, j));
  return out;
}

RootLocation roots_outside_disk(const PolyCoeffs& a) {
  if (a.size() < 1)
    throw InvalidInput("roots_outside_disk: empty coefficient vector");
  bool all_zero = true;
  for (int i = 0; i < a.size(); ++i)
    if (a[i] != 0.0) all_zero = false;
  if (all_zero) throw InvalidInput("roots_outside_disk: zero polynomial");

  const SymMatrix bez = bezoutian_dense(a);
  const Eigen::VectorXd eigs = linalg::sym_eigenvalues(bez.dense());
  RootLocation loc;
  loc.bez_min_eigenvalue = eigs(0);
  const double near_zero = 1e-9 * (1.0 + bez.max_abs());
  loc.indeterminate = std::abs(eigs(0)) <= near_zero;
  loc.all_outside = eigs(0) > 0.0;
  if (a[0] == 0.0) loc.all_outside = false;  // root at the origin
  return loc;
}

CycleData cycle_data_from_stable_poly(double p, double q, double r, int n,
                                      int k) {
  if (n < 3 || k < 1 || 2 * k >= n)
    throw InvalidInput("cycle_data_from_stable_poly: need 1 <= k < n-k");
  PolyCoeffs a;
  a.c.assign(static_cast<std::size_t>(n), 0.0);
  a.c[0] = p;
  a.c[static_cast<std::size_t>(k)] = q;
  a.c[static_cast<std::size_t>(n - k)] = r;

  const RootLocation loc = roots_outside_disk(a);
  if (!loc.all_outside || loc.indeterminate)
    throw InvalidInput(
        "cycle_data_from_stable_poly: polynomial must have all roots "
        "strictly outside the closed unit disk");

  const SymMatrix bez = bezoutian_dense(a);
  // Cross terms between the z^k and z^{n-k} slots cancel exactly, so the
  // Bezoutian lives on diagonals {0, k, n-k} only.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const int d = i - j;
      if (d != k && d != n - k && bez(i, j) != 0.0)
        throw StructureViolation(
            "cycle_data_from_stable_poly: Bezoutian support leak");
    }

  const SymMatrix t = SymMatrix::from_dense(linalg::spd_inverse(bez.dense()));
  if (!is_toeplitz(t, 1e-8).first)
    throw StructureViolation(
        "cycle_data_from_stable_poly: Bezoutian inverse is not Toeplitz");

  CycleData data;
  data.t0 = t(0, 0);
  data.tk = t(k, 0);
  data.tnk = t(n - k, 0);
  return data;
}

StablePoly stable_poly_from_cycle_data(double t0, double tk, double tnk,
                                       int n, int k) {
  if (n < 3 || k < 1 || 2 * k >= n)
    throw InvalidInput("stable_poly_from_cycle_data: need 1 <= k < n-k");
  const Pattern pattern(n, {k, n - k});
  const PartialToeplitz pt(pattern, t0, {tk, tnk});
  const CompletionResult res = maxdet_complete(pt);

  const double f0 = res.inverse(0, 0);
  if (!(f0 > 0.0))
    throw StructureViolation(
        "stable_poly_from_cycle_data: inverse has nonpositive corner");
  StablePoly poly;
  poly.p = std::sqrt(f0);
  poly.q = res.inverse(k, 0) / poly.p;
  poly.r = res.inverse(n - k, 0) / poly.p;
  return poly;
}

}  // namespace toepmax
