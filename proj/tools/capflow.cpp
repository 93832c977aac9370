// capflow: free-boundary IMCF/MCF runs, verification campaigns and oracles.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "capflow/cli/commands.hpp"
#include "capflow/cli/config.hpp"
#include "capflow/profile_io.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("capflow");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("CAPFLOW_LOG");
  const std::string level = env ? env : "error";
  if (level == "debug") spdlog::set_level(spdlog::level::debug);
  else if (level == "info") spdlog::set_level(spdlog::level::info);
  else {
    spdlog::set_level(spdlog::level::err);
    if (level != "error") spdlog::error("CAPFLOW_LOG must be error, info or debug; using error");
  }
}

capflow::cli::CliConfig load_config(const std::string& path, const std::string& out_dir) {
  capflow::cli::CliConfig c;
  if (!path.empty()) {
    try {
      c = capflow::cli::parse_config(capflow::read_text_file(path));
    } catch (const capflow::cli::ConfigError& e) {
      throw capflow::cli::ConfigError(path + ": " + e.what());
    }
  }
  if (!out_dir.empty()) c.output = out_dir;
  spdlog::debug("config: n={} rho={} flattening={} resolution={} output={}", c.n, c.rho, c.flattening,
                c.flow.num_nodes, c.output);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Axisymmetric free-boundary inverse mean curvature and mean curvature flow in the unit ball"};
  app.require_subcommand(1);
  app.footer(capflow::cli::config_reference() + "\nEnvironment: CAPFLOW_LOG = error | info | debug\n");

  std::string config_path, out_dir, experiment;
  int jobs = 1, oracle_n = 3;
  double oracle_rho = 1.0;

  auto* run = app.add_subcommand("run", "run one flow and write series.csv and snapshots");
  run->add_option("-c,--config", config_path, "config file")->check(CLI::ExistingFile);
  run->add_option("-o,--output", out_dir, "output directory");

  auto* verify = app.add_subcommand("verify", "run a verification experiment and write JSON reports");
  verify->add_option("name", experiment, "inequality | monotonicity | arealaw | smoothing | cone | hdecay | all")
      ->required();
  verify->add_option("-c,--config", config_path, "config file")->check(CLI::ExistingFile);
  verify->add_option("-o,--output", out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "run sweep_n x sweep_rho x sweep_flattening, one subdirectory each");
  sweep->add_option("-c,--config", config_path, "config file")->check(CLI::ExistingFile);
  sweep->add_option("-o,--output", out_dir, "output directory");
  sweep->add_option("-j,--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "print closed-form cap values as JSON");
  oracle->add_option("--n", oracle_n, "dimension n >= 2");
  oracle->add_option("--rho", oracle_rho, "cap sphere radius > 0");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*oracle) return capflow::cli::cmd_oracle(oracle_n, oracle_rho, std::cout, std::cerr);
    auto config = load_config(config_path, out_dir);
    if (*run) return capflow::cli::cmd_run(config, std::cout, std::cerr);
    if (*verify) return capflow::cli::cmd_verify(config, experiment, std::cout, std::cerr);
    if (*sweep) return capflow::cli::cmd_sweep(config, jobs, std::cout, std::cerr);
  } catch (const capflow::cli::ConfigError& e) {
    std::cerr << "capflow: " << e.what() << "\n";
    return capflow::cli::exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "capflow: " << e.what() << "\n";
    return capflow::cli::exit_failed;
  }
  return capflow::cli::exit_usage;
}
