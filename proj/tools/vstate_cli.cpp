#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vstate/error.hpp"
#include "vstate/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Corotating and translating vortex-patch pairs: local curves, continuation, diagnostics, plots"};
  app.require_subcommand(1);

  std::string config_file;
  std::vector<std::string> overrides;
  std::string seed_from;

  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_file, "TOML configuration file");
    cmd->add_option("--set", overrides, "override a config key, e.g. --set floors.separation=0.1")
        ->allow_extra_args(false);
  };

  auto* local = app.add_subcommand("local", "solve along the local curve eps in local.eps");
  add_run_options(local);
  auto* cont = app.add_subcommand("continue", "seed with the local curve and continue the branch");
  add_run_options(cont);
  cont->add_option("--seed-from", seed_from, "resume after the last rows of a branch JSONL file");

  std::string branch_file;
  std::string report;
  auto* diag = app.add_subcommand("diagnose", "recompute residuals and certificates for every branch row");
  diag->add_option("branch", branch_file, "branch JSONL file")->required();
  diag->add_option("-o,--output", report, "write a JSON report here");

  std::vector<int> indices;
  std::string plot_dir = ".";
  auto* plot = app.add_subcommand("plot", "SVG contour plots of selected rows and a monitor plot");
  plot->add_option("branch", branch_file, "branch JSONL file")->required();
  plot->add_option("-i,--index", indices, "row indices (negative counts from the end)");
  plot->add_option("-o,--out-dir", plot_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : vstate::exit_config;
  }

  try {
    if (*local || *cont) {
      std::optional<std::filesystem::path> file;
      if (!config_file.empty()) file = config_file;
      vstate::ContinuationConfig config;
      try {
        config = vstate::load_config(file, overrides);
      } catch (const vstate::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return vstate::exit_config;
      }
      if (*local) return vstate::cmd_local(config, std::cout);
      std::optional<std::filesystem::path> seed;
      if (!seed_from.empty()) seed = seed_from;
      return vstate::cmd_continue(config, seed, std::cout);
    }
    if (*diag) {
      std::optional<std::filesystem::path> out;
      if (!report.empty()) out = report;
      return vstate::cmd_diagnose(branch_file, out, std::cout);
    }
    return vstate::cmd_plot(branch_file, indices, plot_dir, std::cout);
  } catch (const vstate::Error& e) {
    std::cerr << "error (" << vstate::to_string(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == vstate::ErrorKind::config ? vstate::exit_config : vstate::exit_solver;
  }
}
