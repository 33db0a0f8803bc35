// Benchmark and verification driver for the symplectic optimization library.

#include <iostream>

#include "CLI11.hpp"
#include "symplopt/acceptance.hpp"
#include "symplopt/bench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Riemannian optimization benchmarks on the symplectic Stiefel manifold"};
  app.require_subcommand(1);

  std::string config_path;
  std::string csv_override, history_override;
  auto* run_cmd = app.add_subcommand("run", "run the scheme sweep described by a config file");
  run_cmd->add_option("config", config_path, "configuration file")->required();
  run_cmd->add_option("--csv", csv_override, "override the CSV output path");
  run_cmd->add_option("--history-dir", history_override, "override the history directory");

  auto* check_cmd = app.add_subcommand("check", "run the acceptance suite");
  (void)check_cmd;

  std::string gen_dir = ".";
  auto* gen_cmd = app.add_subcommand("gen", "emit example config files");
  gen_cmd->add_option("dir", gen_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      symplopt::bench::ExperimentConfig config = symplopt::bench::load_config(config_path);
      if (!csv_override.empty()) config.csv_path = csv_override;
      if (!history_override.empty()) config.history_dir = history_override;
      auto results = symplopt::bench::run_suite(config, std::cout);
      const int errors = symplopt::bench::count_errors(results);
      std::cout << results.size() << " schemes, " << errors << " errors; results in "
                << config.csv_path << "\n";
      return errors == 0 ? 0 : 1;
    }
    if (check_cmd->parsed()) {
      const int failures = symplopt::acceptance::run_all(std::cout);
      std::cout << (failures == 0 ? "all criteria passed\n"
                                  : std::to_string(failures) + " criteria failed\n");
      return failures == 0 ? 0 : 1;
    }
    if (gen_cmd->parsed()) {
      symplopt::bench::write_example_configs(gen_dir);
      std::cout << "wrote example configs to " << gen_dir << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
