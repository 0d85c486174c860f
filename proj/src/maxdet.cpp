#include "toepmax/maxdet.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "toepmax/core_ops.hpp"
#include "toepmax/errors.hpp"

namespace toepmax {

std::vector<std::pair<int, int>> free_pairs(const Pattern& p) {
  std::vector<std::pair<int, int>> out;
  const int n = p.order();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!p.contains(j - i)) out.emplace_back(i, j);
  return out;
}

std::pair<bool, double> is_toeplitz(const SymMatrix& m, double tol) {
  const int n = m.order();
  double deviation = 0.0;
  for (int d = 0; d < n; ++d) {
    double lo = m(d, 0), hi = lo;
    for (int i = d; i < n; ++i) {
      const double v = m(i, i - d);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    deviation = std::max(deviation, hi - lo);
  }
  return {deviation <= tol * (1.0 + m.max_abs()), deviation};
}

namespace {

// Specified part plus one scalar per free pair, in free_pairs order.
struct Problem {
  int n = 0;
  Eigen::MatrixXd base;
  std::vector<std::pair<int, int>> pairs;

  explicit Problem(const PartialToeplitz& pt)
      : n(pt.order()), base(Eigen::MatrixXd::Zero(pt.order(), pt.order())),
        pairs(free_pairs(pt.pattern())) {
    for (int i = 0; i < n; ++i) {
      base(i, i) = pt.t0();
      for (int j = 0; j < i; ++j)
        if (pt.pattern().contains(i - j))
          base(i, j) = base(j, i) = pt.value(i - j);
    }
  }

  int vars() const { return static_cast<int>(pairs.size()); }

  Eigen::MatrixXd assemble(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd t = base;
    for (int a = 0; a < vars(); ++a) {
      const auto [i, j] = pairs[static_cast<std::size_t>(a)];
      t(i, j) = t(j, i) = x(a);
    }
    return t;
  }
};

double logdet_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  const auto& l = llt.matrixLLT();
  double s = 0.0;
  for (int i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

Eigen::MatrixXd symmetric_inverse(const Eigen::LLT<Eigen::MatrixXd>& llt,
                                  int n) {
  Eigen::MatrixXd w = llt.solve(Eigen::MatrixXd::Identity(n, n));
  return 0.5 * (w + w.transpose());
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// (max L_ii / min L_ii)^2, a cheap condition-number lower bound.
double llt_condition_estimate(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  const auto& l = llt.matrixLLT();
  double lo = l(0, 0), hi = l(0, 0);
  for (int i = 1; i < l.rows(); ++i) {
    lo = std::min(lo, l(i, i));
    hi = std::max(hi, l(i, i));
  }
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  const double q = hi / lo;
  return q * q;
}

}  // namespace

FeasibilityReport find_pd_completion(const PartialToeplitz& pt,
                                     const FeasibilityOptions& opts) {
  const Problem prob(pt);
  const int n = prob.n;
  const int m = prob.vars();

  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  if (opts.start) {
    if (static_cast<int>(opts.start->size()) != m)
      throw InvalidInput("find_pd_completion: start has wrong length");
    for (int a = 0; a < m; ++a)
      x(a) = (*opts.start)[static_cast<std::size_t>(a)];
    if (!x.allFinite())
      throw InvalidInput("find_pd_completion: start is not finite");
  }

  auto make_report = [&](const Eigen::VectorXd& xf) {
    FeasibilityReport rep;
    const Eigen::MatrixXd t = prob.assemble(xf);
    rep.lambda_min_achieved = min_eigenvalue(t);
    rep.witness = SymMatrix::from_dense(t);
    rep.witness_free.assign(xf.data(), xf.data() + m);
    const double tol = 1e-9 * std::max(pt.t0(), 0.0);
    if (rep.lambda_min_achieved > tol)
      rep.status = Feasibility::StrictlyFeasible;
    else if (std::abs(rep.lambda_min_achieved) <= tol)
      rep.status = Feasibility::BoundaryOnly;
    else
      rep.status = Feasibility::Infeasible;
    return rep;
  };

  // Nonpositive diagonal settles it: lambda_min <= t0 for every completion,
  // and equality needs the zero matrix.
  if (pt.t0() <= 0.0) {
    FeasibilityReport rep = make_report(x);
    bool all_zero = pt.t0() == 0.0;
    for (double v : pt.values())
      if (v != 0.0) all_zero = false;
    rep.status = all_zero ? Feasibility::BoundaryOnly : Feasibility::Infeasible;
    return rep;
  }
  if (m == 0) return make_report(x);

  // Interior-point ascent on F(x, s) = s + mu * logdet(T(x) - s I).
  const double scale = std::max(pt.t0(), 1.0);
  const double mu_min = opts.mu_min_rel * scale;
  const double stage_tol = 1e-9 * scale;

  double s = 0.0;
  {
    const double lam0 = min_eigenvalue(prob.assemble(x));
    s = lam0 - 0.5 * (1.0 + std::abs(lam0));
  }

  int used = 0;
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

  auto stage = [&](double mu) {
    for (int it = 0; it < 80; ++it) {
      if (++used > opts.max_newton)
        throw MaxIterations("find_pd_completion: iteration budget exceeded");
      const Eigen::MatrixXd shifted = prob.assemble(x) - s * eye;
      Eigen::LLT<Eigen::MatrixXd> llt(shifted);
      const Eigen::MatrixXd w = symmetric_inverse(llt, n);
      const Eigen::MatrixXd w2 = w * w;

      Eigen::VectorXd g(m + 1);
      for (int a = 0; a < m; ++a) {
        const auto [i, j] = prob.pairs[static_cast<std::size_t>(a)];
        g(a) = 2.0 * mu * w(i, j);
      }
      g(m) = 1.0 - mu * w.trace();
      if (g.cwiseAbs().maxCoeff() <= stage_tol) return;

      Eigen::MatrixXd neg_h(m + 1, m + 1);
      for (int a = 0; a < m; ++a) {
        const auto [i, j] = prob.pairs[static_cast<std::size_t>(a)];
        for (int b = a; b < m; ++b) {
          const auto [k, l] = prob.pairs[static_cast<std::size_t>(b)];
          const double v = 2.0 * mu * (w(i, k) * w(j, l) + w(i, l) * w(j, k));
          neg_h(a, b) = neg_h(b, a) = v;
        }
        neg_h(a, m) = neg_h(m, a) = -2.0 * mu * w2(i, j);
      }
      neg_h(m, m) = mu * w2.trace();

      Eigen::LLT<Eigen::MatrixXd> llt_h(neg_h);
      Eigen::VectorXd d;
      if (llt_h.info() == Eigen::Success)
        d = llt_h.solve(g);
      else
        d = g;
      double dir = g.dot(d);
      if (!(dir > 0.0) || !d.allFinite()) {
        d = g;
        dir = g.squaredNorm();
      }

      const double f0 = s + mu * logdet_from_llt(llt);
      double alpha = 1.0;
      bool accepted = false;
      for (int h = 0; h < 70 && !accepted; ++h, alpha *= 0.5) {
        const Eigen::VectorXd xt = x + alpha * d.head(m);
        const double st = s + alpha * d(m);
        Eigen::LLT<Eigen::MatrixXd> lt(prob.assemble(xt) - st * eye);
        if (lt.info() != Eigen::Success) continue;
        const double ft = st + mu * logdet_from_llt(lt);
        if (ft >= f0 + 1e-4 * alpha * dir) {
          x = xt;
          s = st;
          accepted = true;
        }
      }
      if (!accepted) return;  // cannot improve at this barrier weight
    }
  };

  double mu = scale;
  bool last = false;
  while (true) {
    stage(mu);
    if (last) break;
    mu *= 0.2;
    if (mu <= mu_min) {
      mu = mu_min;
      last = true;
    }
  }
  return make_report(x);
}

namespace {

CompletionResult solve_newton(const Problem& prob, Eigen::VectorXd x,
                              const SolveOptions& opts) {
  const int n = prob.n;
  const int m = prob.vars();

  CompletionResult res;
  Eigen::MatrixXd t = prob.assemble(x);
  Eigen::LLT<Eigen::MatrixXd> llt(t);
  if (llt.info() != Eigen::Success)
    throw NotStrictlyFeasible("maxdet_complete: start is not positive definite");
  double f = logdet_from_llt(llt);
  res.objective_trace.push_back(f);

  Eigen::VectorXd x_prev, g_prev;
  int accepted_steps = 0;
  bool converged = false;
  double last_gnorm = 0.0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    const Eigen::MatrixXd w = symmetric_inverse(llt, n);
    Eigen::VectorXd g(m);
    for (int a = 0; a < m; ++a) {
      const auto [i, j] = prob.pairs[static_cast<std::size_t>(a)];
      g(a) = 2.0 * w(i, j);
    }
    const double gnorm = m > 0 ? g.cwiseAbs().maxCoeff() : 0.0;
    // The gradient entries are inverse entries, so their attainable accuracy
    // scales with the size of the inverse. Once steps stop shrinking the
    // gradient it has hit that floor; accept within the scaled band rather
    // than grinding the iteration cap on near-boundary optima.
    const double wscale = w.cwiseAbs().maxCoeff();
    const bool at_floor = last_gnorm > 0.0 && gnorm > 0.5 * last_gnorm;
    if (gnorm <= opts.tol ||
        (at_floor && gnorm <= opts.tol * (1.0 + wscale))) {
      converged = true;
      break;
    }
    last_gnorm = gnorm;

    Eigen::MatrixXd neg_h(m, m);
    for (int a = 0; a < m; ++a) {
      const auto [i, j] = prob.pairs[static_cast<std::size_t>(a)];
      for (int b = a; b < m; ++b) {
        const auto [k, l] = prob.pairs[static_cast<std::size_t>(b)];
        const double v = 2.0 * (w(i, k) * w(j, l) + w(i, l) * w(j, k));
        neg_h(a, b) = neg_h(b, a) = v;
      }
    }

    Eigen::LLT<Eigen::MatrixXd> llt_h(neg_h);
    bool use_newton = llt_h.info() == Eigen::Success &&
                      llt_condition_estimate(llt_h) <= 1e12;
    Eigen::VectorXd d;
    if (use_newton) {
      d = llt_h.solve(g);
    } else {
      // Barzilai-Borwein step length on the ascent gradient.
      double gamma = 1.0 / std::max(1.0, gnorm);
      if (x_prev.size() == m) {
        const Eigen::VectorXd sv = x - x_prev;
        const Eigen::VectorXd yv = g_prev - g;
        const double sy = sv.dot(yv);
        if (sy > 0.0) gamma = sv.squaredNorm() / sy;
      }
      d = gamma * g;
    }
    double dir = g.dot(d);
    if (!(dir > 0.0) || !d.allFinite()) {
      d = g;
      dir = g.squaredNorm();
    }

    double alpha = 1.0;
    bool step_taken = false;

    // Inside the quadratic convergence region (Newton decrement^2 = g.d
    // small) the objective gain is below the resolution of logdet, so a
    // sufficient-decrease test can only reject progress. Take the full
    // Newton step whenever it stays feasible.
    if (use_newton && dir <= 0.0625) {
      const Eigen::VectorXd xt = x + d;
      Eigen::LLT<Eigen::MatrixXd> lt(prob.assemble(xt));
      if (lt.info() == Eigen::Success) {
        x_prev = x;
        g_prev = g;
        x = xt;
        f = logdet_from_llt(lt);
        llt = lt;
        step_taken = true;
      }
    }

    for (int h = 0; h < 60 && !step_taken; ++h, alpha *= 0.5) {
      const Eigen::VectorXd xt = x + alpha * d;
      Eigen::LLT<Eigen::MatrixXd> lt(prob.assemble(xt));
      if (lt.info() != Eigen::Success) continue;
      const double ft = logdet_from_llt(lt);
      if (ft >= f + 1e-4 * alpha * dir) {
        x_prev = x;
        g_prev = g;
        x = xt;
        f = ft;
        llt = lt;
        step_taken = true;
      }
    }
    if (!step_taken) {
      if (opts.allow_stall) break;
      throw MaxIterations("maxdet_complete: line search stalled");
    }
    ++accepted_steps;
    res.objective_trace.push_back(f);
  }

  if (!converged && !opts.allow_stall)
    throw MaxIterations("maxdet_complete: iteration limit reached");

  t = prob.assemble(x);
  llt.compute(t);
  const Eigen::MatrixXd w = symmetric_inverse(llt, n);
  res.completion = SymMatrix::from_dense(t);
  res.inverse = SymMatrix::from_dense(w);
  res.log_det = logdet_from_llt(llt);
  res.iterations = accepted_steps;
  res.converged = converged;
  res.free_values.assign(x.data(), x.data() + m);
  double residual = 0.0;
  double gnorm = 0.0;
  for (const auto& [i, j] : prob.pairs)
    residual = std::max(residual, std::abs(w(i, j)));
  gnorm = 2.0 * residual;
  res.certificate_residual = residual;
  res.grad_norm = gnorm;
  res.toeplitz_deviation = is_toeplitz(res.completion).second;
  return res;
}

}  // namespace

CompletionResult maxdet_complete(const PartialToeplitz& pt,
                                 const SolveOptions& opts) {
  const Problem prob(pt);
  const int m = prob.vars();

  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  bool have_start = false;
  if (opts.warm_start) {
    if (static_cast<int>(opts.warm_start->size()) != m)
      throw InvalidInput("maxdet_complete: warm start has wrong length");
    Eigen::VectorXd cand(m);
    for (int a = 0; a < m; ++a)
      cand(a) = (*opts.warm_start)[static_cast<std::size_t>(a)];
    if (cand.allFinite() &&
        Eigen::LLT<Eigen::MatrixXd>(prob.assemble(cand)).info() ==
            Eigen::Success) {
      x = cand;
      have_start = true;
    }
  }
  if (!have_start) {
    if (Eigen::LLT<Eigen::MatrixXd>(prob.assemble(x)).info() ==
        Eigen::Success) {
      have_start = true;
    }
  }
  if (!have_start) {
    const FeasibilityReport rep = find_pd_completion(pt);
    if (rep.status == Feasibility::Infeasible)
      throw InfeasibleInstance(
          "maxdet_complete: no positive semidefinite completion exists");
    if (rep.status == Feasibility::BoundaryOnly)
      throw NotStrictlyFeasible(
          "maxdet_complete: instance has no positive definite completion");
    for (int a = 0; a < m; ++a)
      x(a) = rep.witness_free[static_cast<std::size_t>(a)];
  }
  return solve_newton(prob, x, opts);
}

CompletionResult maxdet_complete(const PartialToeplitz& pt, double tol) {
  SolveOptions opts;
  opts.tol = tol;
  return maxdet_complete(pt, opts);
}

CompletionResult structured_complete(const PartialToeplitz& pt,
                                     const PatternClass& cls) {
  const BlockDecomposition dec = block_permutation(pt, cls);
  const int n = pt.order();

  std::map<int, CompletionResult> solved;
  for (const Block& b : dec.blocks)
    if (b.size >= 2 && !solved.count(b.size))
      solved.emplace(b.size, maxdet_complete(b.to_partial(dec.t0)));

  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  double log_det = 0.0;
  int iterations = 0;
  bool converged = true;

  int offset = 0;
  for (const Block& b : dec.blocks) {
    if (b.size == 1) {
      // An isolated node contributes the bare diagonal entry.
      if (!(dec.t0 > 0.0))
        throw NotStrictlyFeasible("structured_complete: t0 must be positive");
      const int p = dec.permutation[static_cast<std::size_t>(offset)];
      c(p, p) = dec.t0;
      w(p, p) = 1.0 / dec.t0;
      log_det += std::log(dec.t0);
    } else {
      const CompletionResult& r = solved.at(b.size);
      for (int a = 0; a < b.size; ++a) {
        const int pa = dec.permutation[static_cast<std::size_t>(offset + a)];
        for (int b2 = 0; b2 <= a; ++b2) {
          const int pb =
              dec.permutation[static_cast<std::size_t>(offset + b2)];
          c(pa, pb) = c(pb, pa) = r.completion(a, b2);
          w(pa, pb) = w(pb, pa) = r.inverse(a, b2);
        }
      }
      log_det += r.log_det;
      iterations += r.iterations;
      converged = converged && r.converged;
    }
    offset += b.size;
  }

  CompletionResult out;
  out.completion = SymMatrix::from_dense(c);
  out.inverse = SymMatrix::from_dense(w);
  out.log_det = log_det;
  out.iterations = iterations;
  out.converged = converged;
  const auto pairs = free_pairs(pt.pattern());
  double residual = 0.0;
  out.free_values.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    residual = std::max(residual, std::abs(w(i, j)));
    out.free_values.push_back(c(i, j));
  }
  out.certificate_residual = residual;
  out.grad_norm = 2.0 * residual;
  out.toeplitz_deviation = is_toeplitz(out.completion).second;
  out.objective_trace.push_back(log_det);
  return out;
}

}  // namespace toepmax
