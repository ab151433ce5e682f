#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "radau/errors.hpp"

int main(int argc, char** argv) {
  using namespace radau::cli;

  CLI::App app{"Conjugate gradients with Gauss, Gauss-Radau and simple A-norm error bounds"};
  app.set_version_flag("--version", "radau-cg 0.1.0");
  std::string command;
  std::string config_path;
  Overrides overrides;
  std::optional<int> digits;
  std::optional<std::string> tau;
  std::optional<std::string> out;
  std::optional<std::size_t> max_iters;

  app.add_option("command", command, "model, solve, analyze, ingest or selftest")
      ->required()
      ->check(CLI::IsMember({"model", "solve", "analyze", "ingest", "selftest"}));
  app.add_option("--config", config_path, "key = value experiment file")->check(CLI::ExistingFile);
  app.add_option("--digits", digits, "decimal digits (0 = native binary64, else 16..4096)");
  app.add_option("--mu", overrides.mu_specs, "shift spec abs:<decimal>, rel:<d> or ulp (repeatable)");
  app.add_option("--tau", tau, "acceptance tolerance for improved bounds");
  app.add_option("--out", out, "output directory");
  app.add_option("--max-iters", max_iters, "iteration cap (0 = twice the dimension)");
  app.add_flag("--oracle", overrides.oracle, "compute lambda_1 and the exact solution");

  CLI11_PARSE(app, argc, argv);
  overrides.digits = digits;
  overrides.tau = tau;
  if (out) overrides.out = *out;
  overrides.max_iters = max_iters;

  try {
    if (command == "selftest") return cmd_selftest(std::cout) == 0 ? 0 : 1;
    if (config_path.empty()) throw radau::Error("'" + command + "' needs --config <file>");
    auto config = load_config(config_path);
    apply_overrides(config, overrides);
    if (command == "model") return cmd_model(config, std::cout);
    if (command == "solve") return cmd_solve(config, std::cout);
    if (command == "analyze") return cmd_analyze(config, std::cout);
    return cmd_ingest(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "radau-cg: error: " << e.what() << '\n';
    return 1;
  }
}
