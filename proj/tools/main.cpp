#include <fstream>
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "toepmax/cli.hpp"

namespace {

int usage_error(const std::string& message) {
  std::cout << nlohmann::json{{"kind", "invalid_input"}, {"message", message}}
                   .dump()
            << "\n";
  return toepmax::cli::kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-determinant and maximum-rank PSD completions of "
               "partial symmetric Toeplitz matrices"};
  app.require_subcommand(0, 1);

  toepmax::cli::RunConfig cfg;
  std::string input_path = "-";
  std::string output_mode = "json";

  const auto add_common = [&](CLI::App* sub, bool takes_input) {
    sub->add_option("--tol", cfg.tol, "solver gradient tolerance");
    sub->add_option("--alpha0", cfg.alpha0, "path schedule start");
    sub->add_option("--rho", cfg.rho, "path schedule decrease factor");
    sub->add_option("--output", output_mode, "report format: json|text");
    sub->add_option("--jobs", cfg.jobs, "worker threads for --batch");
    sub->add_option("--seed", cfg.seed, "seed for randomized verification");
    sub->add_flag("--verify", cfg.verify, "run the independent cross-check");
    sub->add_flag("--batch", cfg.batch,
                  "read JSON-lines input, one instance per line");
    if (takes_input)
      sub->add_option("input", input_path,
                      "input file path, or - for standard input");
  };

  const std::pair<const char*, const char*> commands[] = {
      {"classify", "report every structural family the pattern matches"},
      {"complete", "maximum-determinant positive definite completion"},
      {"psd-complete", "maximum-rank PSD completion (boundary instances ok)"},
      {"path", "trace the shifted completion path toward alpha = 0"},
      {"sd", "singularity-degree probe of the completion boundary"},
      {"bezout", "Bezout matrix and root location of a polynomial"},
      {"gs-invert", "rebuild a Toeplitz inverse from its first column"},
  };
  for (const auto& [name, blurb] : commands)
    add_common(app.add_subcommand(name, blurb), true);
  add_common(app.add_subcommand(
                 "demo", "run the built-in end-to-end reference checks"),
             false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }

  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    std::cout << app.help();
    return toepmax::cli::kExitUsage;
  }
  cfg.command = subs.front()->get_name();

  if (output_mode == "json")
    cfg.output = toepmax::cli::OutputMode::Json;
  else if (output_mode == "text")
    cfg.output = toepmax::cli::OutputMode::Text;
  else
    return usage_error("unknown output mode: " + output_mode);

  if (cfg.command != "demo" && input_path != "-") {
    std::ifstream file(input_path);
    if (!file) return usage_error("cannot open input file: " + input_path);
    return toepmax::cli::run(cfg, file, std::cout);
  }
  return toepmax::cli::run(cfg, std::cin, std::cout);
}
