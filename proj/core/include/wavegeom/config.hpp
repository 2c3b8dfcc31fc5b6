#ifndef WAVEGEOM_CONFIG_HPP
#define WAVEGEOM_CONFIG_HPP

// Experiment configuration: a strict JSON schema (schema_version 1). Unknown
// keys anywhere are ConfigError with the offending path, so a typo in a
// tolerance name cannot silently fall back to a default.

#include <string>
#include <vector>

#include "wavegeom/eikonal.hpp"
#include "wavegeom/kernel.hpp"
#include "wavegeom/metric.hpp"
#include "wavegeom/report.hpp"
#include "wavegeom/strichartz.hpp"

namespace wavegeom {

struct StrichartzConfig {
  std::vector<std::pair<std::string, std::string>> pairs = {{"4", "4"}};
  std::string profile_radial = "one";
  std::string profile_angular = "const";
  std::vector<int> levels = {3, 4, 5, 6};
  std::vector<int> orders = {0, 1, 2};
  ScalingOptions scaling;
};

struct KernelRunConfig {
  int j = 4;
  std::vector<double> taus = {1.6, 1.96, 2.4, 2.95, 3.62, 4.44, 5.45, 6.68, 8.2,
                              10.06, 12.34, 16.0};
  DecayLadderConfig ladder;  // taus copied in at load time
  double ratio_ceiling = 60.0;
};

struct LemmaRunConfig {
  std::string pairs_file;     // JSON list of {t, x:[..], s, y:[..]}
  int n_random_pairs = 24;    // used when pairs_file is empty
  int omega_level = 1;        // icosahedral sample level per pair
  double case4_constant = 1.0;
  double tol_factor = 1e-8;
};

struct EikonalRunConfig {
  int n_geodesics = 42;
  int regularity_points = 4;
  int residual_points = 24;
  int omega_level = 1;
  double slice_time = 0.6;
};

struct ExperimentConfig {
  int schema_version = 1;
  std::uint64_t seed = 20240901;
  std::string output_dir = "out";
  int threads = 0;
  bool strict = false;

  MetricSpec metric;
  SolverOptions solver;
  int omega_grid_level = 1;

  StrichartzConfig strichartz;
  KernelRunConfig kernel;
  LemmaRunConfig lemma;
  EikonalRunConfig eikonal;

  // canonical serialized form (drives the config hash)
  Json to_json() const;
  std::uint64_t hash() const { return fnv1a_hash(json_dump(to_json())); }
};

ExperimentConfig default_config();
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace wavegeom

#endif
