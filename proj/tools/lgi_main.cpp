// lgi: run discrete-mechanics scenarios from JSON configs.
//
//   lgi run <config.json> [--out DIR]
//   lgi compare <a.json> <b.json> --projection identity|phi_l [--out DIR]
//
// Exit codes: 0 ok, 1 usage, 2 config error, 3 solver failure, 4 i/o error.
// LGI_LOG_LEVEL (trace, debug, info, warn, error, off) sets log verbosity;
// logs go to stderr, default level warn.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "lgi/cli.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("lgi");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("LGI_LOG_LEVEL")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only honour "off" when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

std::optional<std::filesystem::path> maybe(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Variational integrators on Lie groupoids"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("config", config, "Scenario JSON")->required();
  run->add_option("--out", out, "Output directory (overrides output.directory)");

  std::string config_a;
  std::string config_b;
  std::string projection;
  auto* compare = app.add_subcommand("compare", "Compare two scenarios step by step");
  compare->add_option("a", config_a, "Scenario A")->required();
  compare->add_option("b", config_b, "Scenario B")->required();
  compare->add_option("--projection", projection, "identity or phi_l")->required();
  compare->add_option("--out", out, "Output directory (default: current directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : static_cast<int>(lgi::cli::ExitCode::usage);
  }

  int code = 0;
  if (*run) {
    spdlog::info("run {}", config);
    code = lgi::cli::run_command(config, maybe(out), std::cerr);
  } else {
    spdlog::info("compare {} {} ({})", config_a, config_b, projection);
    code = lgi::cli::compare_command(config_a, config_b, projection, maybe(out), std::cerr);
  }
  spdlog::debug("exit code {}", code);
  return code;
}
