// wavegeom: numerical verification runs for the eikonal / parametrix / kernel
// machinery. Subcommands execute one pipeline each and write a deterministic
// report.json (plus CSV artifacts and a timings.json sidecar) into the output
// directory.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "pipelines.hpp"

using namespace wavegeom;

namespace {

std::string default_output_dir() {
  if (const char* env = std::getenv("WAVEGEOM_OUTPUT_DIR")) return env;
  return "out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification of eikonal geometry, oscillatory-integral "
               "parametrices and dispersive kernel decay"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::string output_dir = default_output_dir();
  bool strict = false;
  int threads = 0;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  app.add_option("-c,--config", config_path, "experiment config (JSON)");
  app.add_option("-o,--output-dir", output_dir,
                 "output directory (default $WAVEGEOM_OUTPUT_DIR or ./out)");
  app.add_flag("--strict", strict, "turn report-only checks into exit-status failures");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");

  auto* cmd_run_flat = app.add_subcommand("run-flat", "flat-exactness suite");
  auto* cmd_run_pert =
      app.add_subcommand("run-perturbed", "perturbed-metric verification suite");
  auto* cmd_eik = app.add_subcommand("verify-eikonal", "eikonal identity suite");
  auto* cmd_lemma =
      app.add_subcommand("verify-lemma", "phase lower bounds over a pairs file");
  auto* cmd_kernel = app.add_subcommand("kernel-decay", "kernel decay ladder");
  auto* cmd_strich =
      app.add_subcommand("strichartz-scaling", "mixed-norm scaling regression");
  auto* cmd_plot = app.add_subcommand("emit-plot-data", "merge run CSVs into a tidy table");
  std::vector<std::string> plot_inputs;
  std::string plot_out = "plot_data.csv";
  cmd_plot->add_option("inputs", plot_inputs, "CSV artifacts to merge")->required();
  cmd_plot->add_option("--name", plot_out, "merged table file name");

  CLI11_PARSE(app, argc, argv);
  seed_set = seed_opt->count() > 0;

  try {
    ExperimentConfig cfg =
        config_path.empty() ? default_config() : load_config_file(config_path);
    cfg.strict = cfg.strict || strict;
    if (threads > 0) cfg.threads = threads;
    if (seed_set) cfg.seed = seed_override;

    pipelines::Result result;
    if (cmd_run_flat->parsed())
      result = pipelines::run_flat(cfg, output_dir);
    else if (cmd_run_pert->parsed())
      result = pipelines::run_perturbed(cfg, output_dir);
    else if (cmd_eik->parsed())
      result = pipelines::verify_eikonal(cfg, output_dir);
    else if (cmd_lemma->parsed())
      result = pipelines::verify_lemma(cfg, output_dir);
    else if (cmd_kernel->parsed())
      result = pipelines::kernel_decay(cfg, output_dir);
    else if (cmd_strich->parsed())
      result = pipelines::strichartz_scaling(cfg, output_dir);
    else if (cmd_plot->parsed())
      result = pipelines::emit_plot_data(plot_inputs, output_dir, plot_out);

    if (result.report.contains("warning"))
      std::cerr << "warning: " << result.report["warning"].get<std::string>() << "\n";
    std::cout << json_dump(result.report);
    if (result.failed_checks > 0) {
      std::cerr << result.failed_checks << " check(s) failed\n";
      if (cfg.strict) return 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaMismatchError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
