// Acceptance suite: eight end-to-end checks, selectable by number on the
// command line (no argument runs all). Each prints exactly one PASS/FAIL
// line; the exit code is the count of failed criteria. Soft observations
// print as "note:" and never fail a criterion.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "toepmax/core_ops.hpp"
#include "toepmax/errors.hpp"
#include "toepmax/linalg.hpp"
#include "toepmax/maxdet.hpp"
#include "toepmax/psd_path.hpp"
#include "toepmax/toeplitz_algebra.hpp"

using namespace toepmax;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Failure {
  std::string detail;
  bool triggered = false;

  // records the first failure; later ones are counted silently
  int count = 0;
  void operator()(const std::string& what) {
    if (!triggered) detail = what;
    triggered = true;
    ++count;
  }
};

// ---- random instance generators ------------------------------------------

std::vector<int> p1_diagonals(std::mt19937& rng, int& n) {
  n = 3 + static_cast<int>(rng() % 10);  // 3..12
  const int kmax = n - 1;
  const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(kmax));
  const int rmax = (n - 1) / k;
  const int r = 1 + static_cast<int>(rng() % static_cast<unsigned>(rmax));
  std::vector<int> d;
  for (int j = 1; j <= r; ++j) d.push_back(j * k);
  return d;
}

std::vector<int> p2_diagonals(std::mt19937& rng, int& n) {
  // n = (r+1)k <= 12 with r >= 2
  for (;;) {
    const int k = 1 + static_cast<int>(rng() % 4);
    const int r = 2 + static_cast<int>(rng() % 4);
    n = (r + 1) * k;
    if (n > 12 || n < 3) continue;
    std::vector<int> d;
    for (int j = 1; j <= r - 2; ++j) d.push_back(j * k);
    d.push_back(r * k);
    return d;
  }
}

std::vector<int> p3_diagonals(std::mt19937& rng, int& n) {
  n = 4 + static_cast<int>(rng() % 9);  // 4..12
  const int kmax = (n - 1) / 2;
  const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(kmax));
  return {k, n - k};
}

PartialToeplitz random_dominated(std::mt19937& rng,
                                 const std::vector<int>& diags, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> vals;
  double sum = 0.0;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    vals.push_back(u(rng));
    sum += std::abs(vals.back());
  }
  return PartialToeplitz(Pattern(n, diags), 1.0 + 2.0 * sum, vals);
}

// Mixture of cosine atoms with nonnegative weights: PSD-completable for
// any pattern because the full mixture matrix extends the data.
PartialToeplitz moment_instance(std::mt19937& rng, const Pattern& p,
                                int atoms) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w, phi;
  for (int m = 0; m < atoms; ++m) {
    w.push_back(0.2 + u(rng));
    phi.push_back(u(rng) * M_PI);
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

std::vector<double> companion_root_moduli(const std::vector<double>& c) {
  int deg = static_cast<int>(c.size()) - 1;
  while (deg > 0 && c[static_cast<std::size_t>(deg)] == 0.0) --deg;
  std::vector<double> mods;
  if (deg == 0) return mods;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i)
    comp(i, deg - 1) =
        -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(deg)];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (int i = 0; i < deg; ++i) mods.push_back(std::abs(es.eigenvalues()(i)));
  return mods;
}

double shifted_free_entry(double theta, double alpha) {
  const double c = std::cos(theta / 3.0);
  const double g = 4.0 * c * c - 1.0;
  return 0.5 * (std::sqrt(alpha * (alpha + 2.0) + g * g) - (1.0 + alpha));
}

PartialToeplitz cycle4(double theta) {
  return PartialToeplitz(Pattern(4, {1, 3}), 1.0,
                         {std::cos(theta / 3.0), std::cos(theta)});
}

// ---- criteria --------------------------------------------------------------

// 1: the mixed 5x5 pattern has the frozen free entries and no Toeplitz
// structure.
bool criterion1() {
  const auto t0 = Clock::now();
  Failure fail;

  PartialToeplitz pt(Pattern(5, {1, 3, 4}), 6.0, {1.0, 1.0, 1.0});
  auto res = maxdet_complete(pt);
  const double x02 = res.completion(0, 2);
  const double x13 = res.completion(1, 3);
  const double x24 = res.completion(2, 4);
  if (std::abs(x02 - 0.3113) > 5e-5) fail("entry (1,3) off: " + std::to_string(x02));
  if (std::abs(x24 - 0.3113) > 5e-5) fail("entry (3,5) off: " + std::to_string(x24));
  if (std::abs(x13 - 0.4247) > 5e-5) fail("entry (2,4) off: " + std::to_string(x13));
  if (is_toeplitz(res.completion).first) fail("completion unexpectedly Toeplitz");

  const double secs = seconds_since(t0);
  if (secs >= 1.0) fail("runtime " + std::to_string(secs) + "s >= 1s");

  std::printf("%s criterion 1 (mixed 5x5 free entries): %s[%.2fs]\n",
              fail.triggered ? "FAIL" : "PASS",
              fail.triggered ? (fail.detail + " ").c_str() : "", secs);
  return !fail.triggered;
}

// 2: on 100 random strictly feasible instances per family, the maxdet
// completion is Toeplitz and certified by its inverse's zero pattern.
// 3: the block fast path agrees with the generic solver on the banded and
// gap families. Both criteria replay the same instance stream.
bool criterion23(bool check_structured) {
  const auto t0 = Clock::now();
  Failure fail;
  std::mt19937 rng(20240815u);

  for (int family = 0; family < 3; ++family) {
    for (int trial = 0; trial < 100; ++trial) {
      int n = 0;
      std::vector<int> diags;
      PatternClass cls;
      if (family == 0) {
        diags = p1_diagonals(rng, n);
        cls = {Form::P1, diags[0], static_cast<int>(diags.size())};
      } else if (family == 1) {
        diags = p2_diagonals(rng, n);
        const int s = static_cast<int>(diags.size());
        cls = {Form::P2, s == 1 ? diags[0] / 2 : diags[0], s + 1};
      } else {
        diags = p3_diagonals(rng, n);
        cls = {Form::P3, diags[0], 0};
      }
      PartialToeplitz pt = random_dominated(rng, diags, n);

      if (find_pd_completion(pt).status != Feasibility::StrictlyFeasible) {
        fail("generator produced a non-strict instance");
        continue;
      }

      auto res = maxdet_complete(pt);
      if (!check_structured) {
        auto [ok, dev] = is_toeplitz(res.completion, 1e-7);
        if (dev > 1e-7)
          fail("Toeplitz deviation " + std::to_string(dev) + " at n=" +
               std::to_string(n));
        (void)ok;
        if (res.certificate_residual > 1e-8)
          fail("certificate residual " +
               std::to_string(res.certificate_residual));
      } else if (family != 2) {
        auto fast = structured_complete(pt, cls);
        double diff = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j <= i; ++j)
            diff = std::max(diff, std::abs(fast.completion(i, j) -
                                           res.completion(i, j)));
        if (diff > 1e-8)
          fail("structured/generic gap " + std::to_string(diff));
      }
    }
  }

  const double secs = seconds_since(t0);
  if (!check_structured && secs >= 60.0)
    fail("runtime " + std::to_string(secs) + "s >= 60s");

  const int num = check_structured ? 3 : 2;
  const char* what = check_structured
                         ? "structured solver cross-check"
                         : "Toeplitz emergence and certificates";
  std::printf("%s criterion %d (%s): %s[%.2fs]\n",
              fail.triggered ? "FAIL" : "PASS", num, what,
              fail.triggered ? (fail.detail + " ").c_str() : "", secs);
  return !fail.triggered;
}

// 4: the shifted 4-cycle family: closed-form free entries, cosine limits,
// and singularity-degree verdicts across the angle range.
bool criterion4() {
  const auto t0 = Clock::now();
  Failure fail;

  for (double theta : {M_PI / 6, M_PI / 2, 3 * M_PI / 4}) {
    for (double alpha : {1.0, 0.1, 0.01}) {
      auto res = path_point(cycle4(theta), alpha);
      const double want = shifted_free_entry(theta, alpha);
      for (double got : res.free_values)
        if (std::abs(got - want) > 1e-8)
          fail("free entry at theta=" + std::to_string(theta) +
               " alpha=" + std::to_string(alpha) + ": " +
               std::to_string(got) + " vs " + std::to_string(want));
    }

    PathLimit lim = path_limit(cycle4(theta));
    SymMatrix want = cosine_matrix(4, theta / 3.0);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j <= i; ++j)
        if (std::abs(lim.limit_completion(i, j) - want(i, j)) > 1e-6)
          fail("limit entry off at theta=" + std::to_string(theta));
    if (lim.completion_rank != 2)
      fail("limit rank " + std::to_string(lim.completion_rank) + " != 2");

    if (sd_probe(cycle4(theta)).verdict != SdVerdict::SdOne)
      fail("verdict not SdOne at theta=" + std::to_string(theta));
  }

  if (sd_probe(cycle4(M_PI)).verdict != SdVerdict::SdAtLeastTwo)
    fail("verdict at theta=pi not SdAtLeastTwo");

  {  // flat angle: rank-1 limit with the cycle-Laplacian exposing matrix
    SdProbe flat = sd_probe(cycle4(0.0));
    if (flat.verdict != SdVerdict::SdOne) fail("flat verdict not SdOne");
    if (flat.exposing_rank != 3)
      fail("flat rank_z " + std::to_string(flat.exposing_rank) + " != 3");

    PathLimit lim = path_limit(cycle4(0.0));
    if (lim.completion_rank != 1) fail("flat limit rank != 1");
    const double a = lim.exposing(0, 0), b = lim.exposing(1, 1);
    const double c = lim.exposing(0, 1), d = lim.exposing(0, 3);
    if (std::abs(a - 0.75) > 1e-4) fail("flat exposing corner diag");
    if (std::abs(b - 0.75) > 1e-4) fail("flat exposing interior diag");
    if (std::abs(c + 0.375) > 1e-4) fail("flat exposing band");
    if (std::abs(d + 0.375) > 1e-4) fail("flat exposing corner");
  }

  const double secs = seconds_since(t0);
  if (secs >= 30.0) fail("runtime " + std::to_string(secs) + "s >= 30s");

  std::printf("%s criterion 4 (shifted cycle closed forms): %s[%.2fs]\n",
              fail.triggered ? "FAIL" : "PASS",
              fail.triggered ? (fail.detail + " ").c_str() : "", secs);
  return !fail.triggered;
}

// 5: the extreme-angle cycle data has the cosine matrix as its unique PSD
// completion; random-start feasibility ascents all find it.
bool criterion5() {
  const auto t0 = Clock::now();
  Failure fail;
  std::mt19937 rng(77u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  for (int n : {4, 5, 6, 8}) {
    const double theta = M_PI / (n - 1);
    PartialToeplitz pt(Pattern(n, {1, n - 1}), 1.0,
                       {std::cos(theta), std::cos((n - 1) * theta)});
    SymMatrix want = cosine_matrix(n, theta);

    SymMatrix got = max_rank_psd_complete(pt);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        if (std::abs(got(i, j) - want(i, j)) > 1e-6)
          fail("completion entry off at n=" + std::to_string(n));

    const std::size_t m = free_pairs(pt.pattern()).size();
    for (int start = 0; start < 20; ++start) {
      FeasibilityOptions fo;
      std::vector<double> x0(m);
      for (double& v : x0) v = u(rng);
      fo.start = x0;
      auto rep = find_pd_completion(pt, fo);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
          if (std::abs(rep.witness(i, j) - want(i, j)) > 1e-5)
            fail("ascent " + std::to_string(start) + " strayed at n=" +
                 std::to_string(n));
    }
  }

  const double secs = seconds_since(t0);
  std::printf("%s criterion 5 (cosine uniqueness at the extreme angle): "
              "%s[%.2fs]\n",
              fail.triggered ? "FAIL" : "PASS",
              fail.triggered ? (fail.detail + " ").c_str() : "", secs);
  return !fail.triggered;
}

// 6: the exposing limit of the corner-pinned cycle concentrates on the
// corner dyad; corner size vs (n-1)/4 is reported, not asserted.
bool criterion6() {
  const auto t0 = Clock::now();
  Failure fail;
  std::string notes;

  for (int n : {4, 5, 6, 7, 8}) {
    ExposingCheck chk = probe_cycle_exposing(n);
    if (chk.interior_abs > 1e-6)
      fail("interior magnitude " + std::to_string(chk.interior_abs) +
           " at n=" + std::to_string(n));
    if (chk.exposing_rank > 1)
      fail("exposing rank " + std::to_string(chk.exposing_rank) + " at n=" +
           std::to_string(n));
    if (!chk.corners_agree) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    " note: n=%d corners %.6f/%.6f/%.6f vs %.4f", n,
                    chk.corner_11, chk.corner_nn, chk.corner_1n,
                    chk.expected_corner);
      notes += buf;
    }
  }

  const double secs = seconds_since(t0);
  std::printf("%s criterion 6 (corner dyad exposing limit): %s[%.2fs]%s\n",
              fail.triggered ? "FAIL" : "PASS",
              fail.triggered ? (fail.detail + " ").c_str() : "", secs,
              notes.c_str());
  return !fail.triggered;
}

// 7: algebra oracles: inverse reconstruction, root location against a
// companion-matrix eigensolver, and the exact shift-product identities.
bool criterion7() {
  const auto t0 = Clock::now();
  Failure fail;
  std::mt19937 rng(171717u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 11);
    std::vector<double> d(static_cast<std::size_t>(n));
    for (double& v : d) v = u(rng);
    d[0] = static_cast<double>(n) + 1.0;
    Eigen::MatrixXd t(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        t(i, j) = d[static_cast<std::size_t>(std::abs(i - j))];
    const Eigen::MatrixXd tinv = t.inverse();

    PolyCoeffs a;
    for (int i = 0; i < n; ++i) a.c.push_back(tinv(i, 0));
    SymMatrix rebuilt = gohberg_semencul_inverse(a);
    const double scale = tinv.cwiseAbs().maxCoeff();
    if ((rebuilt.dense() - tinv).cwiseAbs().maxCoeff() > 1e-9 * scale)
      fail("inverse reconstruction off at n=" + std::to_string(n));
  }

  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  int polys = 0;
  while (polys < 1000) {
    const int deg = 1 + static_cast<int>(rng() % 8);
    std::vector<double> c(static_cast<std::size_t>(deg + 1));
    for (double& v : c) v = coeff(rng);
    if (c[0] == 0.0 || c.back() == 0.0) continue;

    const auto mods = companion_root_moduli(c);
    bool excluded = false, outside = true;
    for (double m : mods) {
      if (std::abs(m - 1.0) < 1e-6) excluded = true;
      outside &= m > 1.0;
    }
    if (excluded) continue;

    const RootLocation loc = roots_outside_disk(PolyCoeffs{c});
    if (!loc.indeterminate && loc.all_outside != outside)
      fail("root location disagrees with companion roots");
    ++polys;
  }

  for (int n = 1; n <= 10; ++n)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const Eigen::MatrixXd want = lower_shift_power(n, k) *
                                     lower_shift_power(n, l).transpose();
        if (shift_product(n, k, l) != want) fail("shift product mismatch");
        if (k < l) {
          const bool equal = shift_product(n, k, l) ==
                             shift_product(n, n - l, n - k);
          if (equal != (l == n - k)) fail("reflection identity mismatch");
        }
      }

  const double secs = seconds_since(t0);
  std::printf("%s criterion 7 (algebra oracles): %s[%.2fs]\n",
              fail.triggered ? "FAIL" : "PASS",
              fail.triggered ? (fail.detail + " ").c_str() : "", secs);
  return !fail.triggered;
}

// 8: staged relaxation on random completable two-diagonal instances:
// Toeplitz, PSD, data preserved bit-exactly.
bool criterion8() {
  const auto t0 = Clock::now();
  Failure fail;
  std::mt19937 rng(88u);

  int done = 0;
  while (done < 50) {
    const int n = 5 + static_cast<int>(rng() % 6);  // 5..10
    const int k = 1 + static_cast<int>(rng() % 3);
    const int r = k + 1 + static_cast<int>(rng() % 3);
    if (k + r > n || r > n - 1) continue;
    Pattern p(n, {k, r});
    // mix strict (many atoms) and rank-deficient (few atoms) data
    const int atoms = 2 + static_cast<int>(rng() % (unsigned)(n));
    PartialToeplitz pt = moment_instance(rng, p, atoms);

    SymMatrix c = complete_relaxed(pt, {Form::P3Prime, k, r});
    ++done;

    auto [ok, dev] = is_toeplitz(c, 1e-6);
    (void)ok;
    if (dev > 1e-6) fail("Toeplitz deviation " + std::to_string(dev));
    const auto eigs = linalg::sym_eigenvalues(c.dense());
    if (eigs(0) < -1e-8)
      fail("lambda_min " + std::to_string(eigs(0)) + " at n=" +
           std::to_string(n));
    if (c(0, 0) != pt.t0() || c(k, 0) != pt.value(k) ||
        c(r, 0) != pt.value(r))
      fail("specified data not preserved exactly");
  }

  const double secs = seconds_since(t0);
  std::printf("%s criterion 8 (staged relaxed completion): %s[%.2fs]\n",
              fail.triggered ? "FAIL" : "PASS",
              fail.triggered ? (fail.detail + " ").c_str() : "", secs);
  return !fail.triggered;
}

}  // namespace

int main(int argc, char** argv) {
  int which = 0;
  if (argc > 1) which = std::atoi(argv[1]);
  if (argc > 1 && (which < 1 || which > 8)) {
    std::fprintf(stderr, "usage: %s [1-8]\n", argv[0]);
    return 2;
  }

  int failures = 0;
  auto run = [&](int num, bool ok) {
    (void)num;
    if (!ok) ++failures;
  };

  for (int c = 1; c <= 8; ++c) {
    if (which != 0 && which != c) continue;
    switch (c) {
      case 1: run(c, criterion1()); break;
      case 2: run(c, criterion23(false)); break;
      case 3: run(c, criterion23(true)); break;
      case 4: run(c, criterion4()); break;
      case 5: run(c, criterion5()); break;
      case 6: run(c, criterion6()); break;
      case 7: run(c, criterion7()); break;
      case 8: run(c, criterion8()); break;
    }
  }
  return failures;
}
