#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "toepmax/errors.hpp"
#include "toepmax/linalg.hpp"
#include "toepmax/maxdet.hpp"
#include "toepmax/psd_path.hpp"
#include "toepmax/toeplitz_algebra.hpp"

using namespace toepmax;

namespace {

// Free entry of the diagonally shifted 4-cycle instance with data
// (1, cos(theta/3), cos(theta)); both free positions share this value.
double shifted_free_entry(double theta, double alpha) {
  const double c = std::cos(theta / 3.0);
  const double g = 4.0 * c * c - 1.0;
  return 0.5 * (std::sqrt(alpha * (alpha + 2.0) + g * g) - (1.0 + alpha));
}

PartialToeplitz cycle4(double theta) {
  return PartialToeplitz(Pattern(4, {1, 3}), 1.0,
                         {std::cos(theta / 3.0), std::cos(theta)});
}

// Nonnegative trigonometric moment data: t_d = sum_m w_m cos(d phi_m) is
// PSD-completable for every pattern (the full cosine mixture completes it).
PartialToeplitz moment_instance(std::mt19937& rng, const Pattern& p,
                                int atoms) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(static_cast<std::size_t>(atoms)),
      phi(static_cast<std::size_t>(atoms));
  for (int m = 0; m < atoms; ++m) {
    w[static_cast<std::size_t>(m)] = 0.2 + u(rng);
    phi[static_cast<std::size_t>(m)] = u(rng) * M_PI;
  }
  auto moment = [&](int d) {
    double s = 0.0;
    for (int m = 0; m < atoms; ++m)
      s += w[static_cast<std::size_t>(m)] *
           std::cos(d * phi[static_cast<std::size_t>(m)]);
    return s;
  };
  std::vector<double> vals;
  for (int d : p.diagonals()) vals.push_back(moment(d));
  return PartialToeplitz(p, moment(0), vals);
}

}  // namespace

TEST_SUITE("psd_path") {
  TEST_CASE("numerical_rank: thresholds and gap detection") {
    Eigen::VectorXd eigs(4);
    eigs << 1e-14, 1e-13, 0.5, 2.0;
    auto rd = linalg::numerical_rank(eigs);
    CHECK(rd.rank == 2);
    CHECK(rd.gap_ok);

    eigs << -0.3, -0.1, -0.05, -1e-3;
    CHECK(linalg::numerical_rank(eigs).rank == 0);

    // noise floor overrides the relative threshold
    eigs << 1e-8, 1e-8, 0.5, 2.0;
    CHECK(linalg::numerical_rank(eigs, 1e-6).rank == 2);
    CHECK(linalg::numerical_rank(eigs, 0.0).rank == 4);
  }

  TEST_CASE("cosine_matrix: values, PSD, rank two") {
    const int n = 5;
    const double theta = M_PI / (n - 1);
    SymMatrix c = cosine_matrix(n, theta);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        CHECK(c(i, j) == doctest::Approx(std::cos((i - j) * theta))
                             .epsilon(1e-15));

    auto eigs = linalg::sym_eigenvalues(c.dense());
    CHECK(eigs(0) > -1e-12);
    CHECK(linalg::numerical_rank(eigs).rank == 2);

    // flat limit is the all-ones matrix, rank one
    auto flat = linalg::sym_eigenvalues(cosine_matrix(n, 0.0).dense());
    CHECK(linalg::numerical_rank(flat).rank == 1);

    CHECK_THROWS_AS(cosine_matrix(1, 0.1), InvalidInput);
    CHECK_THROWS_AS(cosine_matrix(5, M_PI), InvalidInput);
    CHECK_THROWS_AS(cosine_matrix(5, -0.1), InvalidInput);
  }

  TEST_CASE("path_point matches the shifted closed form") {
    for (double theta : {M_PI / 6, M_PI / 2, 3 * M_PI / 4})
      for (double alpha : {1.0, 0.1, 0.01}) {
        auto res = path_point(cycle4(theta), alpha);
        const double want = shifted_free_entry(theta, alpha);
        CHECK(res.free_values[0] == doctest::Approx(want).epsilon(1e-10)
                                        .scale(1.0));
        CHECK(res.free_values[1] == doctest::Approx(want).epsilon(1e-10)
                                        .scale(1.0));
        // the shift applies to the diagonal only
        CHECK(res.completion(0, 0) == 1.0 + alpha);
        CHECK(res.completion(1, 0) == std::cos(theta / 3.0));
      }
    CHECK_THROWS_AS(path_point(cycle4(1.0), 0.0), InvalidInput);
    CHECK_THROWS_AS(path_point(cycle4(1.0), -1.0), InvalidInput);
  }

  TEST_CASE("path_limit: boundary cycle lands on the cosine matrix") {
    for (double theta : {M_PI / 6, M_PI / 2, 3 * M_PI / 4, M_PI}) {
      PathLimit lim = path_limit(cycle4(theta));
      CHECK(lim.extrapolated);
      REQUIRE(lim.alpha_trace.size() == 27);
      CHECK(lim.alpha_trace.front().first == 1.0);

      SymMatrix want = cosine_matrix(4, theta / 3.0);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j)
          CHECK(std::abs(lim.limit_completion(i, j) - want(i, j)) < 1e-6);
      CHECK(lim.completion_rank == 2);
      CHECK(lim.rank_gaps_ok);
      CHECK(lim.support_residual < 1e-6);
      CHECK(lim.complementarity_residual < 1e-6);

      // exposing matrix: PSD and orthogonal to the limit completion
      auto eigs = linalg::sym_eigenvalues(lim.exposing.dense());
      CHECK(eigs(0) > -1e-6);
      CHECK(lim.exposing_rank == (theta == M_PI ? 1 : 2));
    }
  }

  TEST_CASE("path_limit: flat limit has a cycle-Laplacian exposing matrix") {
    PartialToeplitz pt(Pattern(4, {1, 3}), 1.0, {1.0, 1.0});
    PathLimit lim = path_limit(pt);
    CHECK(lim.completion_rank == 1);
    CHECK(lim.exposing_rank == 3);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j <= i; ++j) {
        const int d = std::abs(i - j);
        const double want = d == 0 ? 0.75 : (d == 2 ? 0.0 : -0.375);
        CHECK(std::abs(lim.exposing(i, j) - want) < 1e-4);
        CHECK(std::abs(lim.limit_completion(i, j) - 1.0) < 1e-6);
      }
  }

  TEST_CASE("path_limit on a strictly feasible instance degenerates") {
    // alpha -> 0 tends to the plain maxdet completion; the scaled inverses
    // then vanish, so no exposing direction survives.
    PartialToeplitz pt(Pattern(4, {1, 3}), 2.0, {0.5, 0.1});
    PathLimit lim = path_limit(pt);
    auto base = maxdet_complete(pt);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j <= i; ++j)
        CHECK(std::abs(lim.limit_completion(i, j) - base.completion(i, j)) <
              1e-6);
    CHECK(lim.completion_rank == 4);
    CHECK(lim.exposing_rank == 0);
  }

  TEST_CASE("path_limit validates options and feasibility") {
    PathOptions bad;
    bad.rho = 1.5;
    CHECK_THROWS_AS(path_limit(cycle4(1.0), bad), InvalidInput);
    PathOptions bad2;
    bad2.alpha0 = -1.0;
    CHECK_THROWS_AS(path_limit(cycle4(1.0), bad2), InvalidInput);

    PartialToeplitz infeasible(Pattern(3, {1}), 1.0, {2.0});
    CHECK_THROWS_AS(path_limit(infeasible), InfeasibleInstance);
  }

  TEST_CASE("sd_probe: strict instances report Slater") {
    PartialToeplitz pt(Pattern(5, {1, 4}), 2.0, {0.5, 0.3});
    SdProbe p = sd_probe(pt);
    CHECK(p.verdict == SdVerdict::SlaterHolds);
    CHECK(p.completion_rank == 5);
    CHECK(p.exposing_rank == 0);
  }

  TEST_CASE("sd_probe: cycle boundary verdicts by angle") {
    CHECK(sd_probe(cycle4(M_PI / 6)).verdict == SdVerdict::SdOne);
    CHECK(sd_probe(cycle4(M_PI / 2)).verdict == SdVerdict::SdOne);

    SdProbe flat = sd_probe(cycle4(0.0));
    CHECK(flat.verdict == SdVerdict::SdOne);
    CHECK(flat.completion_rank == 1);
    CHECK(flat.exposing_rank == 3);

    SdProbe pi = sd_probe(cycle4(M_PI));
    CHECK(pi.verdict == SdVerdict::SdAtLeastTwo);
    CHECK(pi.completion_rank == 2);
    CHECK(pi.exposing_rank == 1);
    REQUIRE(pi.exposing_rank_bound.has_value());
    CHECK(*pi.exposing_rank_bound <= 1);
  }

  TEST_CASE("sd_probe: non-cycle boundary is inconclusive") {
    // {1} with t1 = t0 pins the unique completion to all-ones.
    PartialToeplitz pt(Pattern(3, {1}), 1.0, {1.0});
    SdProbe p = sd_probe(pt);
    CHECK(p.verdict == SdVerdict::Inconclusive);
    CHECK(p.completion_rank == 1);

    PartialToeplitz infeasible(Pattern(3, {1}), 1.0, {2.0});
    CHECK_THROWS_AS(sd_probe(infeasible), InfeasibleInstance);
  }

  TEST_CASE("max_rank_psd_complete: strict progression uses the fast path") {
    PartialToeplitz pt(Pattern(6, {1, 2}), 2.0, {0.8, 0.3});
    SymMatrix c = max_rank_psd_complete(pt);
    auto base = maxdet_complete(pt);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j <= i; ++j)
        CHECK(std::abs(c(i, j) - base.completion(i, j)) < 1e-8);
    CHECK(is_toeplitz(c, 1e-8).first);
  }

  TEST_CASE("max_rank_psd_complete: boundary cycle returns the cosine") {
    for (int n : {4, 5, 6}) {
      const double theta = M_PI / (n - 1);
      PartialToeplitz pt(Pattern(n, {1, n - 1}), 1.0,
                         {std::cos(theta), std::cos((n - 1) * theta)});
      SymMatrix c = max_rank_psd_complete(pt);
      SymMatrix want = cosine_matrix(n, theta);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
          CHECK(std::abs(c(i, j) - want(i, j)) < 1e-6);
    }
  }

  TEST_CASE("max_rank_psd_complete: pattern and feasibility guards") {
    PartialToeplitz general(Pattern(5, {1, 3, 4}), 6.0, {1.0, 1.0, 1.0});
    CHECK_THROWS_AS(max_rank_psd_complete(general), InvalidInput);

    PartialToeplitz infeasible(Pattern(4, {1, 2, 3}), 1.0, {1.0, 1.0, -1.0});
    CHECK_THROWS_AS(max_rank_psd_complete(infeasible), InfeasibleInstance);
  }

  TEST_CASE("complete_relaxed: banded two-diagonal family") {
    std::mt19937 rng(808u);
    for (int trial = 0; trial < 10; ++trial) {
      // {1,3} with n >= 5 is P2' (k=1, r=3) but not P2
      const int n = 5 + static_cast<int>(rng() % 4);
      Pattern p(n, {1, 3});
      PartialToeplitz pt = moment_instance(rng, p, 3);
      SymMatrix c = complete_relaxed(pt, {Form::P2Prime, 1, 3});
      CHECK(is_toeplitz(c, 1e-6).first);
      CHECK(c(0, 0) == pt.t0());
      CHECK(c(1, 0) == pt.value(1));
      CHECK(c(3, 0) == pt.value(3));
      auto eigs = linalg::sym_eigenvalues(c.dense());
      CHECK(eigs(0) >= -1e-8 * (1.0 + c.max_abs()));
    }
  }

  TEST_CASE("complete_relaxed: sparse pair family") {
    std::mt19937 rng(809u);
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 7 + static_cast<int>(rng() % 4);
      Pattern p(n, {2, 3});  // P3' with k=2, r=3 whenever n >= 5
      PartialToeplitz pt = moment_instance(rng, p, 3);
      SymMatrix c = complete_relaxed(pt, {Form::P3Prime, 2, 3});
      CHECK(is_toeplitz(c, 1e-6).first);
      CHECK(c(0, 0) == pt.t0());
      CHECK(c(2, 0) == pt.value(2));
      CHECK(c(3, 0) == pt.value(3));
      auto eigs = linalg::sym_eigenvalues(c.dense());
      CHECK(eigs(0) >= -1e-8 * (1.0 + c.max_abs()));
    }
  }

  TEST_CASE("complete_relaxed rejects classes the pattern lacks") {
    PartialToeplitz pt(Pattern(6, {1, 3}), 2.0, {0.5, 0.2});
    CHECK_THROWS_AS(complete_relaxed(pt, PatternClass{Form::P3Prime, 1, 4}),
                    InvalidInput);
    CHECK_THROWS_AS(complete_relaxed(pt, PatternClass{Form::P1, 1, 3}),
                    InvalidInput);
  }

  TEST_CASE("cycle_inverse_form: recovers the generating coefficients") {
    std::mt19937 rng(611u);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 4 + static_cast<int>(rng() % 5);
      const double p = 0.6 + std::abs(u(rng));
      const double q = 0.4 * p * u(rng);
      const double r = 0.4 * p * u(rng);
      CycleData d = cycle_data_from_stable_poly(p, q, r, n, 1);
      auto res = maxdet_complete(
          PartialToeplitz(Pattern(n, {1, n - 1}), d.t0, {d.tk, d.tnk}));

      CycleInverseForm f = cycle_inverse_form(res.completion);
      CHECK(f.corner_diag == doctest::Approx(p * p).epsilon(1e-7));
      CHECK(f.interior_diag ==
            doctest::Approx(p * p + q * q - r * r).epsilon(1e-7));
      CHECK(f.band == doctest::Approx(p * q).epsilon(1e-7).scale(1.0));
      CHECK(f.corner == doctest::Approx(p * r).epsilon(1e-7).scale(1.0));
    }
  }

  TEST_CASE("cycle_inverse_form rejects non-template inverses") {
    // A PD matrix whose inverse has full support.
    SymMatrix m(4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j <= i; ++j)
        m.set(i, j, i == j ? 2.0 : 0.3 / (1 + std::abs(i - j)));
    CHECK_THROWS_AS(cycle_inverse_form(m), StructureViolation);
  }

  TEST_CASE("probe_cycle_exposing: corner dyad limit") {
    // theta = pi/(n-1) puts the far diagonal at -1; the exposing limit
    // collapses onto the corner dyad, so its rank is at most one and the
    // interior diagonal dies. Only n = 4 admits the two-kernel-vector
    // analysis, hence the verdict split.
    for (int n : {4, 5, 6}) {
      ExposingCheck chk = probe_cycle_exposing(n);
      CHECK(chk.n == n);
      CHECK(chk.verdict == (n == 4 ? SdVerdict::SdAtLeastTwo
                                   : SdVerdict::Inconclusive));
      CHECK(chk.completion_rank == 2);
      CHECK(chk.exposing_rank <= 1);
      CHECK(chk.interior_abs < 1e-6);
      CHECK(chk.expected_corner ==
            doctest::Approx((n - 1) / 4.0).epsilon(1e-14));
      CHECK(chk.corners_agree);
      CHECK(chk.corner_max_err < 1e-3 * (1.0 + chk.expected_corner));
    }
  }
}
