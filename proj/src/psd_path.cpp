#include "toepmax/psd_path.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>

#include "toepmax/errors.hpp"
#include "toepmax/linalg.hpp"

namespace toepmax {

CompletionResult path_point(const PartialToeplitz& pt, double alpha,
                            double tol) {
  if (!(alpha > 0.0)) throw InvalidInput("path_point: alpha must be positive");
  SolveOptions opts;
  opts.tol = tol;
  opts.allow_stall = true;  // near-singular points hit the gradient floor
  return maxdet_complete(pt.shifted(alpha), opts);
}

namespace {

double inf_norm(const Eigen::VectorXd& v) {
  return v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
}

Eigen::VectorXd pack_lower(const SymMatrix& m) {
  const int n = m.order();
  Eigen::VectorXd v(n * (n + 1) / 2);
  int a = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) v(a++) = m(i, j);
  return v;
}

SymMatrix unpack_lower(const Eigen::VectorXd& v, int n) {
  SymMatrix m(n);
  int a = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m.set(i, j, v(a++));
  return m;
}

struct Extrapolation {
  Eigen::VectorXd value;
  double residual = 0.0;
  bool accepted = true;  // false when the window check forced the raw point
};

// One Aitken delta-squared pass, applied per component so that entries
// converging at different rates each cancel their own leading term.
std::vector<Eigen::VectorXd> aitken_sweep(
    const std::vector<Eigen::VectorXd>& v) {
  std::vector<Eigen::VectorXd> out;
  for (std::size_t j = 1; j + 1 < v.size(); ++j) {
    Eigen::VectorXd y = v[j + 1];
    for (int c = 0; c < y.size(); ++c) {
      const double d1 = v[j + 1](c) - v[j](c);
      const double d0 = v[j](c) - v[j - 1](c);
      const double den = d1 - d0;
      // keep the raw entry where the second difference has cancelled away
      if (std::abs(den) > 1e-14 * (std::abs(d1) + std::abs(d0)))
        y(c) = v[j + 1](c) - d1 * d1 / den;
    }
    out.push_back(std::move(y));
  }
  return out;
}

Extrapolation extrapolate_to_zero(const std::vector<Eigen::VectorXd>& v) {
  Extrapolation ex;
  const int last = static_cast<int>(v.size()) - 1;
  ex.value = v[static_cast<std::size_t>(last)];
  const double scale = 1.0 + inf_norm(ex.value);

  const double d_last =
      last >= 1 ? inf_norm(v[static_cast<std::size_t>(last)] -
                           v[static_cast<std::size_t>(last - 1)])
                : 0.0;
  if (last >= 1 && d_last <= 1e-13 * scale) {
    // settled to machine precision; the raw point is the limit
    ex.residual = d_last;
    return ex;
  }

  // iterated Aitken, each sweep costs two points
  const int sweeps = std::min(3, (static_cast<int>(v.size()) - 3) / 2);
  if (sweeps < 1) {
    ex.residual = d_last;
    ex.accepted = false;
    return ex;
  }
  std::vector<Eigen::VectorXd> s = aitken_sweep(v);
  for (int k = 1; k < sweeps; ++k) s = aitken_sweep(s);

  // The tail of the schedule carries the per-point solve noise, so the most
  // consistent window is not necessarily the deepest one: keep the entry
  // that agrees best with its predecessor.
  std::size_t best = 1;
  double best_res = inf_norm(s[1] - s[0]);
  for (std::size_t j = 2; j < s.size(); ++j) {
    const double res = inf_norm(s[j] - s[j - 1]);
    if (res < best_res) {
      best = j;
      best_res = res;
    }
  }
  ex.residual = best_res;
  if (ex.residual > 1e-4 * scale) {
    ex.accepted = false;
    return ex;
  }
  ex.value = s[best];
  return ex;
}

}  // namespace

PathLimit path_limit(const PartialToeplitz& pt, const PathOptions& opts) {
  if (!(opts.alpha0 > 0.0) || !(opts.rho > 0.0) || !(opts.rho < 1.0) ||
      !(opts.alpha_min > 0.0) || !(opts.alpha_min <= opts.alpha0))
    throw InvalidInput("path_limit: bad schedule parameters");

  const FeasibilityReport rep = find_pd_completion(pt);
  if (rep.status == Feasibility::Infeasible)
    throw InfeasibleInstance("path_limit: no PSD completion exists");

  const auto pairs = free_pairs(pt.pattern());
  const int n = pt.order();
  const int m = static_cast<int>(pairs.size());

  PathLimit pl;
  std::vector<Eigen::VectorXd> xs, zs;
  for (double alpha = opts.alpha0; alpha >= opts.alpha_min;
       alpha *= opts.rho) {
    SolveOptions so;
    so.tol = opts.solve_tol;
    so.allow_stall = true;
    const int j = static_cast<int>(xs.size());
    if (j == 1) {
      so.warm_start = std::vector<double>(xs[0].data(), xs[0].data() + m);
    } else if (j >= 2) {
      const Eigen::VectorXd pred =
          xs[static_cast<std::size_t>(j - 1)] +
          opts.rho * (xs[static_cast<std::size_t>(j - 1)] -
                      xs[static_cast<std::size_t>(j - 2)]);
      so.warm_start = std::vector<double>(pred.data(), pred.data() + m);
    }
    const CompletionResult r = maxdet_complete(pt.shifted(alpha), so);
    Eigen::VectorXd x(m);
    for (int a = 0; a < m; ++a)
      x(a) = r.free_values[static_cast<std::size_t>(a)];
    xs.push_back(std::move(x));
    zs.push_back(alpha * pack_lower(r.inverse));
    pl.alpha_trace.emplace_back(alpha, r.free_values);
  }
  if (xs.empty()) throw InvalidInput("path_limit: empty alpha schedule");

  const Extrapolation ex = extrapolate_to_zero(xs);
  const Extrapolation ez = extrapolate_to_zero(zs);
  pl.extrapolated = ex.accepted && ez.accepted;
  pl.extrapolation_residual = std::max(ex.residual, ez.residual);

  // Free entries come from the extrapolation, specified ones from the data.
  SymMatrix xbar(n);
  for (int i = 0; i < n; ++i) {
    xbar.set(i, i, pt.t0());
    for (int j = 0; j < i; ++j)
      if (pt.pattern().contains(i - j)) xbar.set(i, j, pt.value(i - j));
  }
  for (int a = 0; a < m; ++a) {
    const auto [i, j] = pairs[static_cast<std::size_t>(a)];
    xbar.set(i, j, ex.value(a));
  }
  pl.limit_completion = xbar;
  pl.exposing = unpack_lower(ez.value, n);

  const Eigen::VectorXd eigs_x =
      linalg::sym_eigenvalues(pl.limit_completion.dense());
  const Eigen::VectorXd eigs_z = linalg::sym_eigenvalues(pl.exposing.dense());
  const auto rank_x = linalg::numerical_rank(eigs_x, 10.0 * ex.residual);
  const auto rank_z = linalg::numerical_rank(eigs_z, 10.0 * ez.residual);
  pl.completion_rank = rank_x.rank;
  pl.exposing_rank = rank_z.rank;
  pl.rank_gaps_ok = rank_x.gap_ok && rank_z.gap_ok;

  double support = 0.0;
  for (const auto& [i, j] : pairs)
    support = std::max(support, std::abs(pl.exposing(i, j)));
  pl.support_residual = support;

  const Eigen::MatrixXd xz = pl.limit_completion.dense() * pl.exposing.dense();
  pl.complementarity_residual = xz.cwiseAbs().maxCoeff();
  return pl;
}

namespace {

std::optional<PatternClass> first_class_of(
    const Pattern& p, std::initializer_list<Form> forms) {
  const auto tags = classify(p);
  for (Form f : forms)
    for (const PatternClass& c : tags)
      if (c.form == f) return c;
  return std::nullopt;
}

}  // namespace

SymMatrix max_rank_psd_complete(const PartialToeplitz& pt) {
  const auto exact = first_class_of(pt.pattern(),
                                    {Form::P1, Form::P2, Form::P3});
  if (!exact)
    throw InvalidInput(
        "max_rank_psd_complete: pattern is outside the supported families");

  const FeasibilityReport rep = find_pd_completion(pt);
  if (rep.status == Feasibility::Infeasible)
    throw InfeasibleInstance(
        "max_rank_psd_complete: no PSD completion exists");

  SymMatrix out(pt.order());
  if (rep.status == Feasibility::StrictlyFeasible) {
    const auto block_form = first_class_of(pt.pattern(), {Form::P1, Form::P2});
    if (block_form) {
      out = structured_complete(pt, *block_form).completion;
    } else {
      SolveOptions so;
      so.warm_start = rep.witness_free;
      out = maxdet_complete(pt, so).completion;
    }
  } else {
    out = path_limit(pt).limit_completion;
  }

  if (!is_toeplitz(out, 1e-6).first)
    throw StructureViolation("max_rank_psd_complete: completion lost the "
                             "Toeplitz structure");
  return out;
}

SymMatrix complete_relaxed(const PartialToeplitz& pt,
                           const PatternClass& cls) {
  if (cls.form != Form::P2Prime && cls.form != Form::P3Prime)
    throw InvalidInput("complete_relaxed: class must be P2' or P3'");
  {
    const auto tags = classify(pt.pattern());
    if (std::find(tags.begin(), tags.end(), cls) == tags.end())
      throw InvalidInput("complete_relaxed: pattern does not match " +
                         to_string(cls));
  }

  const int n = pt.order();
  const int m = cls.form == Form::P2Prime ? (cls.r + 1) * cls.k
                                          : cls.k + cls.r;

  // Stage 1: the leading principal submatrix of order m carries the same
  // diagonals and there they form an exact family.
  const PartialToeplitz head(Pattern(m, pt.pattern().diagonals()), pt.t0(),
                             pt.values());
  const SymMatrix head_done = max_rank_psd_complete(head);

  // Stage 2: freeze its first row as banded data on the full order.
  if (m == n) return head_done;
  std::vector<int> band(static_cast<std::size_t>(m - 1));
  std::vector<double> band_values(static_cast<std::size_t>(m - 1));
  for (int d = 1; d < m; ++d) {
    band[static_cast<std::size_t>(d - 1)] = d;
    band_values[static_cast<std::size_t>(d - 1)] =
        pt.pattern().contains(d) ? pt.value(d) : head_done(d, 0);
  }
  const PartialToeplitz banded(Pattern(n, band), pt.t0(), band_values);

  // Stage 3: banded completion on the full order.
  const SymMatrix out = max_rank_psd_complete(banded);

  const Eigen::VectorXd eigs = linalg::sym_eigenvalues(out.dense());
  if (eigs(0) < -1e-8 * (1.0 + out.max_abs()))
    throw StructureViolation("complete_relaxed: completion is not PSD");
  if (!is_toeplitz(out, 1e-6).first)
    throw StructureViolation("complete_relaxed: completion is not Toeplitz");
  for (int d : pt.pattern().diagonals())
    if (out(d, 0) != pt.value(d))
      throw StructureViolation("complete_relaxed: data entry was modified");
  return out;
}

namespace {

// Largest rank of a PSD matrix s11 w1 w1' + s22 w2 w2' + s12 (w1 w2' + w2 w1')
// that vanishes on every free position. The coefficient space is cut out by
// one linear constraint per free pair; the PSD question reduces to the 2x2
// coefficient matrix [[s11, s12], [s12, s22]].
int kernel_dyad_rank_bound(const Eigen::VectorXd& w1,
                           const Eigen::VectorXd& w2,
                           const std::vector<std::pair<int, int>>& pairs) {
  const int rows = static_cast<int>(pairs.size());
  int null_dim = 3;
  Eigen::MatrixXd v_basis = Eigen::MatrixXd::Identity(3, 3);
  if (rows > 0) {
    Eigen::MatrixXd a(rows, 3);
    for (int r = 0; r < rows; ++r) {
      const auto [i, j] = pairs[static_cast<std::size_t>(r)];
      a(r, 0) = w1(i) * w1(j);
      a(r, 1) = w2(i) * w2(j);
      a(r, 2) = w1(i) * w2(j) + w2(i) * w1(j);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-4 * sv(0)) ++rank;
    if (!(sv(0) > 0.0)) rank = 0;
    null_dim = 3 - rank;
    v_basis = svd.matrixV();
  }

  if (null_dim <= 0) return 0;
  if (null_dim >= 3) return 2;

  auto coeff_matrix = [&](const Eigen::Vector3d& s) {
    Eigen::Matrix2d m;
    m << s(0), s(2), s(2), s(1);
    return m;
  };

  if (null_dim == 1) {
    const Eigen::Matrix2d m = coeff_matrix(v_basis.col(2));
    const double det = m.determinant();
    const double tol = 1e-6 * m.squaredNorm();
    if (det > tol) return 2;
    if (det >= -tol) return 1;
    return 0;
  }

  // Two coefficient directions left: sweep their unit circle.
  const Eigen::Matrix2d m1 = coeff_matrix(v_basis.col(1));
  const Eigen::Matrix2d m2 = coeff_matrix(v_basis.col(2));
  int best = 0;
  const int grid = 4096;
  for (int g = 0; g < grid; ++g) {
    const double phi = 2.0 * M_PI * g / grid;
    const Eigen::Matrix2d m = std::cos(phi) * m1 + std::sin(phi) * m2;
    const double tr = m.trace();
    const double det = m.determinant();
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double lo = tr / 2.0 - disc;
    const double hi = tr / 2.0 + disc;
    const double tol = 1e-6 * (1.0 + m.cwiseAbs().maxCoeff());
    if (lo < -tol) continue;  // not PSD
    const int rank = (hi > tol ? 1 : 0) + (lo > tol ? 1 : 0);
    best = std::max(best, rank);
  }
  return best;
}

std::pair<SdProbe, std::optional<PathLimit>> sd_probe_impl(
    const PartialToeplitz& pt) {
  SdProbe probe;
  const int n = pt.order();

  const FeasibilityReport rep = find_pd_completion(pt);
  if (rep.status == Feasibility::Infeasible)
    throw InfeasibleInstance("sd_probe: no PSD completion exists");
  if (rep.status == Feasibility::StrictlyFeasible) {
    probe.verdict = SdVerdict::SlaterHolds;
    probe.completion_rank = n;
    return {probe, std::nullopt};
  }

  PathLimit pl = path_limit(pt);
  probe.completion_rank = pl.completion_rank;
  probe.exposing_rank = pl.exposing_rank;
  probe.support_residual = pl.support_residual;
  probe.complementarity_residual = pl.complementarity_residual;

  const bool cycle = first_class_of(pt.pattern(), {Form::P3}).has_value();
  if (!cycle) return {probe, std::move(pl)};

  const double z_scale = std::max(1.0, pl.exposing.max_abs());
  const double xz_scale =
      1.0 + pl.limit_completion.max_abs() * pl.exposing.max_abs();
  const bool trusted = pl.rank_gaps_ok &&
                       pl.support_residual <= 1e-6 * z_scale &&
                       pl.complementarity_residual <= 1e-6 * xz_scale;
  if (!trusted) return {probe, std::move(pl)};

  const int rx = pl.completion_rank;
  const int rz = pl.exposing_rank;
  if (rx + rz == n && rz >= 1) {
    probe.verdict = SdVerdict::SdOne;
  } else if (rz <= 1 && n - rx == 2) {
    // A one-step exposing matrix would have to be a PSD combination of the
    // kernel dyads that vanishes on the free positions.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        pl.limit_completion.dense());
    const int bound = kernel_dyad_rank_bound(es.eigenvectors().col(0),
                                             es.eigenvectors().col(1),
                                             free_pairs(pt.pattern()));
    probe.exposing_rank_bound = bound;
    if (bound <= 1) probe.verdict = SdVerdict::SdAtLeastTwo;
  }
  return {probe, std::move(pl)};
}

}  // namespace

SdProbe sd_probe(const PartialToeplitz& pt) {
  return sd_probe_impl(pt).first;
}

CycleInverseForm cycle_inverse_form(const SymMatrix& t, double tol) {
  const int n = t.order();
  if (n < 3) throw InvalidInput("cycle_inverse_form: need order >= 3");
  const auto chol = linalg::try_cholesky(t.dense());
  if (!chol.ok)
    throw InvalidInput("cycle_inverse_form: matrix is not positive definite");
  const SymMatrix w =
      SymMatrix::from_dense(linalg::inverse_from_cholesky(chol.lower));
  const double scale = w.max_abs();

  CycleInverseForm form;
  form.corner_diag = w(0, 0);
  form.interior_diag = w(1, 1);
  form.band = w(1, 0);
  form.corner = w(n - 1, 0);

  auto expect = [&](double got, double want, const char* what) {
    if (std::abs(got - want) > tol * (1.0 + scale))
      throw StructureViolation(std::string("cycle_inverse_form: ") + what);
  };
  expect(w(n - 1, n - 1), form.corner_diag, "corner diagonal mismatch");
  for (int i = 1; i < n - 1; ++i)
    expect(w(i, i), form.interior_diag, "interior diagonal mismatch");
  for (int i = 0; i < n - 1; ++i)
    expect(w(i + 1, i), form.band, "off-diagonal band mismatch");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (i - j != 1 && i - j != n - 1)
        expect(w(i, j), 0.0, "support leak outside the template");

  const double lhs = form.corner_diag * form.interior_diag;
  const double rhs = form.corner_diag * form.corner_diag +
                     form.band * form.band - form.corner * form.corner;
  if (std::abs(lhs - rhs) > tol * (1.0 + scale * scale))
    throw StructureViolation(
        "cycle_inverse_form: determinant relation violated");
  return form;
}

SymMatrix cosine_matrix(int n, double theta) {
  if (n < 2) throw InvalidInput("cosine_matrix: need n >= 2");
  if (!(theta >= 0.0) || !(theta <= M_PI / (n - 1)))
    throw InvalidInput("cosine_matrix: theta outside [0, pi/(n-1)]");
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m.set(i, j, std::cos((i - j) * theta));
  return m;
}

ExposingCheck probe_cycle_exposing(int n) {
  if (n < 3) throw InvalidInput("probe_cycle_exposing: need n >= 3");
  const double theta = M_PI / (n - 1);
  const PartialToeplitz pt(Pattern(n, {1, n - 1}), 1.0,
                           {std::cos(theta), -1.0});
  auto [probe, pl] = sd_probe_impl(pt);

  ExposingCheck chk;
  chk.n = n;
  chk.verdict = probe.verdict;
  chk.completion_rank = probe.completion_rank;
  chk.exposing_rank = probe.exposing_rank;
  chk.expected_corner = (n - 1) / 4.0;
  if (pl) {
    const SymMatrix& z = pl->exposing;
    for (int i = 1; i < n - 1; ++i)
      chk.interior_abs = std::max(chk.interior_abs, std::abs(z(i, i)));
    chk.corner_11 = z(0, 0);
    chk.corner_nn = z(n - 1, n - 1);
    chk.corner_1n = z(n - 1, 0);
    chk.corner_max_err =
        std::max({std::abs(chk.corner_11 - chk.expected_corner),
                  std::abs(chk.corner_nn - chk.expected_corner),
                  std::abs(std::abs(chk.corner_1n) - chk.expected_corner)});
    chk.corners_agree =
        chk.corner_max_err <= 1e-3 * (1.0 + chk.expected_corner);
  }
  return chk;
}

}  // namespace toepmax
