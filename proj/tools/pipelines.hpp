#ifndef WAVEGEOM_TOOLS_PIPELINES_HPP
#define WAVEGEOM_TOOLS_PIPELINES_HPP

// Experiment pipelines behind the CLI subcommands. Each pipeline runs its
// checks, collects a deterministic report (no wall-clock content) plus a
// list of artifact files written under the output directory, and counts
// failed checks for --strict exit status.

#include <string>
#include <vector>

#include "wavegeom/config.hpp"

namespace wavegeom::pipelines {

struct Result {
  Json report;                         // deterministic given config + seed
  Json timings;                        // wall clock per stage (sidecar only)
  std::vector<std::string> artifacts;  // file names relative to output_dir
  int failed_checks = 0;
};

Result run_flat(const ExperimentConfig& cfg, const std::string& out_dir);
Result run_perturbed(const ExperimentConfig& cfg, const std::string& out_dir);
Result verify_eikonal(const ExperimentConfig& cfg, const std::string& out_dir);
Result verify_lemma(const ExperimentConfig& cfg, const std::string& out_dir);
Result kernel_decay(const ExperimentConfig& cfg, const std::string& out_dir);
Result strichartz_scaling(const ExperimentConfig& cfg, const std::string& out_dir);

// Merges per-run CSV artifacts into one tidy long-format table; every input
// CSV must share one header, and each must sit next to its run report.json
// (the source of the metadata columns).
Result emit_plot_data(const std::vector<std::string>& csv_paths, const std::string& out_dir,
                      const std::string& out_name);

}  // namespace wavegeom::pipelines

#endif
