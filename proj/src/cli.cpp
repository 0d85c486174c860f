#include "toepmax/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "toepmax/errors.hpp"
#include "toepmax/json_io.hpp"
#include "toepmax/linalg.hpp"
#include "toepmax/maxdet.hpp"
#include "toepmax/partial_toeplitz.hpp"
#include "toepmax/pattern.hpp"
#include "toepmax/psd_path.hpp"
#include "toepmax/toeplitz_algebra.hpp"

namespace toepmax::cli {

namespace {

using nlohmann::json;
using Lines = std::vector<std::string>;

struct Outcome {
  int code = kExitOk;
  Lines lines;
};

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Outcome error_outcome(const char* kind, const std::string& message,
                      int code) {
  return {code, {json{{"kind", kind}, {"message", message}}.dump()}};
}

void text_kv(Lines& lines, const std::string& key, const std::string& value) {
  lines.push_back(key + ": " + value);
}

void text_matrix(Lines& lines, const SymMatrix& m, const std::string& title) {
  lines.push_back(title + ":");
  for (int i = 0; i < m.order(); ++i) {
    std::string row = " ";
    for (int j = 0; j < m.order(); ++j) row += " " + fmt6(m(i, j));
    lines.push_back(row);
  }
}

const char* verdict_name(SdVerdict v) {
  switch (v) {
    case SdVerdict::SlaterHolds: return "SlaterHolds";
    case SdVerdict::SdOne: return "SdOne";
    case SdVerdict::SdAtLeastTwo: return "SdAtLeastTwo";
    case SdVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::optional<PatternClass> pick_class(const std::vector<PatternClass>& tags,
                                       std::initializer_list<Form> forms) {
  for (Form f : forms)
    for (const PatternClass& c : tags)
      if (c.form == f) return c;
  return std::nullopt;
}

json class_names(const std::vector<PatternClass>& tags) {
  json out = json::array();
  for (const PatternClass& c : tags) out.push_back(to_string(c));
  return out;
}

// classify accepts instances without "t0"; only n and the data keys matter.
Pattern pattern_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("instance: expected a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw InvalidInput("instance: missing integer field \"n\"");
  json full = j;
  if (!full.contains("t0")) full["t0"] = 1.0;
  if (!full.contains("data")) full["data"] = json::object();
  return partial_toeplitz_from_json(full).pattern();
}

std::vector<double> numeric_array(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field) || !j[field].is_array() ||
      j[field].empty())
    throw InvalidInput(std::string("input: missing non-empty array \"") +
                       field + "\"");
  std::vector<double> out;
  for (const auto& v : j[field]) {
    if (!v.is_number() || !std::isfinite(v.get<double>()))
      throw InvalidInput(std::string("input: \"") + field +
                         "\" must hold finite numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double matrix_max_diff(const SymMatrix& a, const SymMatrix& b) {
  double d = 0.0;
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; j <= i; ++j)
      d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

Outcome do_classify(const RunConfig& cfg, const json& input) {
  const Pattern p = pattern_from_json(input);
  const auto tags = classify(p);
  if (cfg.output == OutputMode::Text) {
    Lines lines;
    for (const PatternClass& c : tags) lines.push_back(to_string(c));
    return {kExitOk, lines};
  }
  const json body{{"schema", kSchemaName},
                  {"command", "classify"},
                  {"n", p.order()},
                  {"classes", class_names(tags)}};
  return {kExitOk, {body.dump()}};
}

Outcome do_complete(const RunConfig& cfg, const json& input) {
  const PartialToeplitz pt = partial_toeplitz_from_json(input);
  const auto tags = classify(pt.pattern());
  const auto fast = pick_class(tags, {Form::P1, Form::P2});

  SolveOptions so;
  so.tol = cfg.tol;
  CompletionResult res;
  if (fast)
    res = structured_complete(pt, *fast);
  else
    res = maxdet_complete(pt, so);

  json verify;
  if (cfg.verify) {
    CompletionResult other;
    std::string mode;
    if (fast) {
      other = maxdet_complete(pt, so);
      mode = "generic";
    } else {
      // Restart the generic solver from the Phase I witness instead of the
      // default start.
      const FeasibilityReport rep = find_pd_completion(pt);
      SolveOptions so2 = so;
      so2.warm_start = rep.witness_free;
      other = maxdet_complete(pt, so2);
      mode = "generic-restart";
    }
    const double diff = matrix_max_diff(res.completion, other.completion);
    verify = json{{"mode", mode},
                  {"max_abs_difference", diff},
                  {"agrees", diff <= 1e-8 * (1.0 + res.completion.max_abs())}};
  }

  const auto pairs = free_pairs(pt.pattern());
  json free_entries = json::array();
  for (std::size_t a = 0; a < pairs.size(); ++a)
    free_entries.push_back(json{{"i", pairs[a].first + 1},
                                {"j", pairs[a].second + 1},
                                {"value", res.free_values[a]}});
  const bool toeplitz = is_toeplitz(res.completion).first;

  if (cfg.output == OutputMode::Text) {
    Lines lines;
    std::string cls;
    for (const PatternClass& c : tags)
      cls += (cls.empty() ? "" : " ") + to_string(c);
    text_kv(lines, "classification", cls);
    text_kv(lines, "solver", fast ? "structured" : "generic");
    text_kv(lines, "log_det", fmt6(res.log_det));
    text_kv(lines, "certificate_residual", fmt6(res.certificate_residual));
    text_kv(lines, "toeplitz",
            std::string(toeplitz ? "true" : "false") + " (deviation " +
                fmt6(res.toeplitz_deviation) + ")");
    std::string fe;
    for (std::size_t a = 0; a < pairs.size(); ++a)
      fe += (a ? " " : "") + ("(" + std::to_string(pairs[a].first + 1) + "," +
                              std::to_string(pairs[a].second + 1) +
                              ")=" + fmt6(res.free_values[a]));
    text_kv(lines, "free_entries", fe);
    if (!verify.is_null())
      text_kv(lines, "verify_max_abs_difference",
              fmt6(verify["max_abs_difference"].get<double>()));
    text_matrix(lines, res.completion, "completion");
    return {kExitOk, lines};
  }

  json body{{"schema", kSchemaName},
            {"command", "complete"},
            {"n", pt.order()},
            {"classification", class_names(tags)},
            {"solver", fast ? "structured" : "generic"},
            {"completion", matrix_to_json(res.completion)},
            {"inverse", matrix_to_json(res.inverse)},
            {"log_det", res.log_det},
            {"iterations", res.iterations},
            {"converged", res.converged},
            {"certificate_residual", res.certificate_residual},
            {"toeplitz", toeplitz},
            {"toeplitz_deviation", res.toeplitz_deviation},
            {"free_entries", free_entries}};
  if (!verify.is_null()) body["verify"] = verify;
  return {kExitOk, {body.dump()}};
}

Outcome do_psd_complete(const RunConfig& cfg, const json& input) {
  const PartialToeplitz pt = partial_toeplitz_from_json(input);
  const auto tags = classify(pt.pattern());
  const auto exact = pick_class(tags, {Form::P1, Form::P2, Form::P3});
  const auto relaxed = pick_class(tags, {Form::P2Prime, Form::P3Prime});

  SymMatrix done;
  std::string method;
  if (exact) {
    done = max_rank_psd_complete(pt);
    method = "exact-family";
  } else if (relaxed) {
    done = complete_relaxed(pt, *relaxed);
    method = "staged-relaxation";
  } else {
    return error_outcome("unsupported_pattern",
                         "psd-complete handles only the P1/P2/P3 families "
                         "and their relaxations",
                         kExitInconclusive);
  }

  const Eigen::VectorXd eigs = linalg::sym_eigenvalues(done.dense());
  const auto rank = linalg::numerical_rank(eigs);

  json verify;
  if (cfg.verify) {
    const FeasibilityReport rep = find_pd_completion(pt);
    if (rep.status == Feasibility::BoundaryOnly) {
      // A singular instance has a unique PSD completion; feasibility
      // ascents from random starts must all land on it.
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      const int m = static_cast<int>(free_pairs(pt.pattern()).size());
      double worst = 0.0;
      for (int s = 0; s < 20; ++s) {
        FeasibilityOptions fo;
        std::vector<double> start(static_cast<std::size_t>(m));
        for (double& v : start) v = unit(rng) * std::abs(pt.t0());
        fo.start = start;
        const FeasibilityReport r = find_pd_completion(pt, fo);
        worst = std::max(worst, matrix_max_diff(r.witness, done));
      }
      verify = json{{"mode", "uniqueness-sampling"},
                    {"starts", 20},
                    {"max_deviation", worst},
                    {"agrees", worst <= 1e-5 * (1.0 + done.max_abs())}};
    } else {
      const CompletionResult other = maxdet_complete(pt);
      const double diff = matrix_max_diff(other.completion, done);
      verify = json{{"mode", "generic-cross-check"},
                    {"max_abs_difference", diff},
                    {"agrees", diff <= 1e-8 * (1.0 + done.max_abs())}};
    }
  }

  const double toeplitz_dev = is_toeplitz(done).second;
  if (cfg.output == OutputMode::Text) {
    Lines lines;
    text_kv(lines, "method", method);
    text_kv(lines, "rank", std::to_string(rank.rank));
    text_kv(lines, "lambda_min", fmt6(eigs(0)));
    text_kv(lines, "toeplitz_deviation", fmt6(toeplitz_dev));
    if (!verify.is_null())
      text_kv(lines, "verify",
              verify["agrees"].get<bool>() ? "agrees" : "disagrees");
    text_matrix(lines, done, "completion");
    return {kExitOk, lines};
  }

  json body{{"schema", kSchemaName},
            {"command", "psd-complete"},
            {"n", pt.order()},
            {"classification", class_names(tags)},
            {"method", method},
            {"completion", matrix_to_json(done)},
            {"rank", rank.rank},
            {"lambda_min", eigs(0)},
            {"toeplitz_deviation", toeplitz_dev}};
  if (!verify.is_null()) body["verify"] = verify;
  return {kExitOk, {body.dump()}};
}

Outcome do_sd(const RunConfig& cfg, const json& input) {
  const PartialToeplitz pt = partial_toeplitz_from_json(input);
  const SdProbe probe = sd_probe(pt);
  const int code =
      probe.verdict == SdVerdict::Inconclusive ? kExitInconclusive : kExitOk;

  if (cfg.output == OutputMode::Text) {
    Lines lines;
    text_kv(lines, "verdict", verdict_name(probe.verdict));
    text_kv(lines, "rank_x", std::to_string(probe.completion_rank));
    text_kv(lines, "rank_z", std::to_string(probe.exposing_rank));
    if (probe.exposing_rank_bound)
      text_kv(lines, "exposing_rank_bound",
              std::to_string(*probe.exposing_rank_bound));
    return {code, lines};
  }

  json body{{"schema", kSchemaName},
            {"command", "sd"},
            {"n", pt.order()},
            {"verdict", verdict_name(probe.verdict)},
            {"rank_x", probe.completion_rank},
            {"rank_z", probe.exposing_rank},
            {"support_residual", probe.support_residual},
            {"complementarity_residual", probe.complementarity_residual}};
  if (probe.exposing_rank_bound)
    body["exposing_rank_bound"] = *probe.exposing_rank_bound;
  return {code, {body.dump()}};
}

Outcome do_path(const RunConfig& cfg, const json& input) {
  const PartialToeplitz pt = partial_toeplitz_from_json(input);
  PathOptions po;
  po.alpha0 = cfg.alpha0;
  po.rho = cfg.rho;
  po.solve_tol = cfg.tol;
  const PathLimit pl = path_limit(pt, po);

  Lines lines;
  if (cfg.output == OutputMode::Text) {
    for (const auto& [alpha, free] : pl.alpha_trace) {
      std::string row = "alpha=" + fmt6(alpha) + " free=";
      for (double v : free) row += " " + fmt6(v);
      lines.push_back(row);
    }
    text_kv(lines, "completion_rank", std::to_string(pl.completion_rank));
    text_kv(lines, "exposing_rank", std::to_string(pl.exposing_rank));
    text_kv(lines, "extrapolated", pl.extrapolated ? "true" : "false");
    text_kv(lines, "support_residual", fmt6(pl.support_residual));
    text_matrix(lines, pl.limit_completion, "limit");
    text_matrix(lines, pl.exposing, "exposing");
    return {kExitOk, lines};
  }

  lines.push_back(json{{"schema", kSchemaName},
                       {"command", "path"},
                       {"n", pt.order()},
                       {"alpha0", po.alpha0},
                       {"rho", po.rho},
                       {"points", pl.alpha_trace.size()}}
                      .dump());
  for (const auto& [alpha, free] : pl.alpha_trace)
    lines.push_back(json{{"alpha", alpha}, {"free", free}}.dump());
  lines.push_back(json{{"limit", matrix_to_json(pl.limit_completion)},
                       {"exposing", matrix_to_json(pl.exposing)},
                       {"completion_rank", pl.completion_rank},
                       {"exposing_rank", pl.exposing_rank},
                       {"rank_gaps_ok", pl.rank_gaps_ok},
                       {"extrapolated", pl.extrapolated},
                       {"extrapolation_residual", pl.extrapolation_residual},
                       {"support_residual", pl.support_residual},
                       {"complementarity_residual",
                        pl.complementarity_residual}}
                      .dump());
  return {kExitOk, lines};
}

Outcome do_bezout(const RunConfig& cfg, const json& input) {
  PolyCoeffs a;
  a.c = numeric_array(input, "coeffs");
  const SymMatrix bez = bezoutian(a);
  const RootLocation loc = roots_outside_disk(a);

  if (cfg.output == OutputMode::Text) {
    Lines lines;
    text_kv(lines, "min_eigenvalue", fmt6(loc.bez_min_eigenvalue));
    text_kv(lines, "all_roots_outside", loc.all_outside ? "true" : "false");
    text_kv(lines, "indeterminate", loc.indeterminate ? "true" : "false");
    text_matrix(lines, bez, "bezoutian");
    return {kExitOk, lines};
  }

  const json body{{"schema", kSchemaName},
                  {"command", "bezout"},
                  {"coeffs", a.c},
                  {"bezoutian", matrix_to_json(bez)},
                  {"min_eigenvalue", loc.bez_min_eigenvalue},
                  {"all_roots_outside", loc.all_outside},
                  {"indeterminate", loc.indeterminate}};
  return {kExitOk, {body.dump()}};
}

Outcome do_gs_invert(const RunConfig& cfg, const json& input) {
  PolyCoeffs col;
  col.c = numeric_array(input, "first_col");
  const SymMatrix inv = gohberg_semencul_inverse(col);

  if (cfg.output == OutputMode::Text) {
    Lines lines;
    text_matrix(lines, inv, "inverse");
    return {kExitOk, lines};
  }
  const json body{{"schema", kSchemaName},
                  {"command", "gs-invert"},
                  {"first_col", col.c},
                  {"inverse", matrix_to_json(inv)}};
  return {kExitOk, {body.dump()}};
}

Outcome do_demo(const RunConfig& cfg) {
  json checks = json::array();
  bool all_pass = true;
  auto add = [&](const std::string& name, bool pass, json detail) {
    detail["name"] = name;
    detail["pass"] = pass;
    checks.push_back(detail);
    all_pass = all_pass && pass;
  };

  {
    // 5x5 instance with pattern {1,3,4}: the completion is PD but never
    // Toeplitz; the free diagonal splits into 0.3113 / 0.4247.
    const PartialToeplitz pt(Pattern(5, {1, 3, 4}), 6.0, {1.0, 1.0, 1.0});
    const CompletionResult res = maxdet_complete(pt);
    const double e02 = std::abs(res.completion(0, 2) - 0.3113);
    const double e24 = std::abs(res.completion(2, 4) - 0.3113);
    const double e13 = std::abs(res.completion(1, 3) - 0.4247);
    const bool toeplitz = is_toeplitz(res.completion).first;
    add("mixed-pattern-5x5-free-entries",
        e02 <= 5e-5 && e24 <= 5e-5 && e13 <= 5e-5 && !toeplitz,
        json{{"entry_13", res.completion(0, 2)},
             {"entry_24", res.completion(1, 3)},
             {"entry_35", res.completion(2, 4)},
             {"toeplitz", toeplitz}});
  }

  const auto cycle4 = [](double theta) {
    return PartialToeplitz(Pattern(4, {1, 3}), 1.0,
                           {std::cos(theta / 3.0), std::cos(theta)});
  };
  {
    // Order-4 cycle closed form for the shifted free entry at alpha = 1.
    const double theta = M_PI / 2.0;
    const double c = std::cos(theta / 3.0);
    const double alpha = 1.0;
    const double s = 4.0 * c * c - 1.0;
    const double expected =
        0.5 * (std::sqrt(alpha * (alpha + 2.0) + s * s) - (1.0 + alpha));
    const CompletionResult res = path_point(cycle4(theta), alpha);
    const double err =
        std::max(std::abs(res.completion(0, 2) - expected),
                 std::abs(res.completion(1, 3) - expected));
    add("cycle4-shifted-free-entry", err <= 1e-8,
        json{{"value", res.completion(0, 2)}, {"expected", expected}});
  }
  {
    const double theta = M_PI / 2.0;
    const PathLimit pl = path_limit(cycle4(theta));
    const SymMatrix want = cosine_matrix(4, theta / 3.0);
    const double err = matrix_max_diff(pl.limit_completion, want);
    add("cycle4-limit-moment-matrix",
        err <= 1e-6 && pl.completion_rank == 2,
        json{{"max_abs_error", err}, {"rank", pl.completion_rank}});
  }
  {
    const SdProbe inner = sd_probe(cycle4(M_PI / 2.0));
    const SdProbe edge = sd_probe(cycle4(M_PI));
    add("cycle4-singularity-degrees",
        inner.verdict == SdVerdict::SdOne &&
            edge.verdict == SdVerdict::SdAtLeastTwo,
        json{{"inner", verdict_name(inner.verdict)},
             {"edge", verdict_name(edge.verdict)}});
  }

  const int code = all_pass ? kExitOk : kExitInconclusive;
  if (cfg.output == OutputMode::Text) {
    Lines lines;
    for (const auto& c : checks)
      lines.push_back(std::string(c["pass"].get<bool>() ? "PASS" : "FAIL") +
                      " " + c["name"].get<std::string>());
    lines.push_back(all_pass ? "all checks passed" : "some checks FAILED");
    return {code, lines};
  }
  const json body{{"schema", kSchemaName},
                  {"command", "demo"},
                  {"checks", checks},
                  {"all_pass", all_pass}};
  return {code, {body.dump()}};
}

Outcome dispatch(const RunConfig& cfg, const json& input) {
  if (cfg.command == "classify") return do_classify(cfg, input);
  if (cfg.command == "complete") return do_complete(cfg, input);
  if (cfg.command == "psd-complete") return do_psd_complete(cfg, input);
  if (cfg.command == "sd") return do_sd(cfg, input);
  if (cfg.command == "path") return do_path(cfg, input);
  if (cfg.command == "bezout") return do_bezout(cfg, input);
  if (cfg.command == "gs-invert") return do_gs_invert(cfg, input);
  return error_outcome("invalid_input", "unknown command: " + cfg.command,
                       kExitUsage);
}

Outcome safe_dispatch(const RunConfig& cfg, const json& input) {
  try {
    return dispatch(cfg, input);
  } catch (const InvalidInput& e) {
    return error_outcome("invalid_input", e.what(), kExitUsage);
  } catch (const InfeasibleInstance& e) {
    return error_outcome("infeasible", e.what(), kExitInfeasible);
  } catch (const NotStrictlyFeasible& e) {
    return error_outcome("not_strictly_feasible", e.what(), kExitInfeasible);
  } catch (const MaxIterations& e) {
    return error_outcome("max_iterations", e.what(), kExitUsage);
  } catch (const BudgetExceeded& e) {
    return error_outcome("budget_exceeded", e.what(), kExitUsage);
  } catch (const StructureViolation& e) {
    return error_outcome("structure_violation", e.what(), kExitUsage);
  } catch (const Error& e) {
    return error_outcome("error", e.what(), kExitUsage);
  } catch (const json::exception& e) {
    return error_outcome("parse_error", e.what(), kExitUsage);
  } catch (const std::exception& e) {
    return error_outcome("internal_error", e.what(), kExitUsage);
  }
}

Outcome parse_and_dispatch(const RunConfig& cfg, const std::string& text) {
  json input;
  try {
    input = json::parse(text);
  } catch (const json::exception& e) {
    return error_outcome("parse_error", e.what(), kExitUsage);
  }
  return safe_dispatch(cfg, input);
}

void emit(std::ostream& out, const Lines& lines) {
  for (const auto& line : lines) out << line << "\n";
}

}  // namespace

int run(const RunConfig& cfg, std::istream& in, std::ostream& out) {
  static const char* kCommands[] = {"classify", "complete", "psd-complete",
                                    "path",     "sd",       "bezout",
                                    "gs-invert", "demo"};
  const bool known =
      std::any_of(std::begin(kCommands), std::end(kCommands),
                  [&](const char* c) { return cfg.command == c; });
  if (!known) {
    emit(out, error_outcome("invalid_input",
                            "unknown command: " + cfg.command, kExitUsage)
                  .lines);
    return kExitUsage;
  }
  if (!(cfg.tol > 0.0) || cfg.tol > 1e-2 || !(cfg.rho > 0.0) ||
      !(cfg.rho < 1.0) || !(cfg.alpha0 > 0.0) || cfg.jobs < 1) {
    emit(out, error_outcome("invalid_input",
                            "flags out of range: need 0 < tol <= 1e-2, "
                            "0 < rho < 1, alpha0 > 0, jobs >= 1",
                            kExitUsage)
                  .lines);
    return kExitUsage;
  }

  if (cfg.command == "demo") {
    const Outcome o = do_demo(cfg);
    emit(out, o.lines);
    return o.code;
  }

  if (cfg.batch) {
    if (cfg.command == "path") {
      emit(out, error_outcome("invalid_input",
                              "path does not support batch mode", kExitUsage)
                    .lines);
      return kExitUsage;
    }
    std::vector<std::string> inputs;
    for (std::string line; std::getline(in, line);) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        inputs.push_back(line);
    }
    std::vector<Outcome> results(inputs.size());
    const int workers = std::min<int>(
        std::max(1, cfg.jobs), static_cast<int>(std::max<std::size_t>(
                                   1, inputs.size())));
    if (workers <= 1) {
      for (std::size_t i = 0; i < inputs.size(); ++i)
        results[i] = parse_and_dispatch(cfg, inputs[i]);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t i = next.fetch_add(1); i < inputs.size();
               i = next.fetch_add(1))
            results[i] = parse_and_dispatch(cfg, inputs[i]);
        });
      for (auto& t : pool) t.join();
    }
    int code = kExitOk;
    for (const Outcome& o : results) {
      emit(out, o.lines);
      code = std::max(code, o.code);
    }
    return code;
  }

  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const Outcome o = parse_and_dispatch(cfg, text);
  emit(out, o.lines);
  return o.code;
}

}  // namespace toepmax::cli
