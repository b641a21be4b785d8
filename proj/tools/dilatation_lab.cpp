#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dilatation/cli/experiment.hpp"

namespace {

int run(const std::string& config_path, const std::string& out_flag, std::optional<std::uint64_t> seed,
        bool quiet) {
  std::ifstream in(config_path);
  if (!in) throw dilatation::ConfigError("cannot read " + config_path);
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw dilatation::ConfigError(std::string("malformed JSON: ") + e.what());
  }
  std::string out_path = out_flag;
  if (out_path.empty() && cfg.is_object() && cfg.contains("output")) {
    if (!cfg["output"].is_string()) throw dilatation::ConfigError("output must be a path string");
    out_path = cfg["output"].get<std::string>();
  }
  const auto outcome = dilatation::run_experiment(cfg, seed);
  const auto text = outcome.csv.render();
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw dilatation::ConfigError("cannot write " + out_path);
    out << text;
  }
  if (!quiet) std::cerr << "verdict: " << (outcome.verdict ? "pass" : "fail") << "\n";
  return outcome.verdict ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for dilatation structures"};
  app.require_subcommand(1);
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a JSON config");
  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  run_cmd->add_option("config", config_path, "Experiment config (JSON)")->required();
  run_cmd->add_option("--out", out_path, "CSV output path (default: config 'output', else stdout)");
  run_cmd->add_option("--seed", seed, "Override the config seed");
  run_cmd->add_flag("--quiet", quiet, "Do not print the verdict to stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    return run(config_path, out_path, seed, quiet);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
