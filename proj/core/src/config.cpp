#include "wavegeom/config.hpp"

#include <set>

namespace wavegeom {

namespace {

// strict readers: every object must enumerate its allowed keys
void check_keys(const Json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(path + " must be an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError("unknown config key '" + path + "." + key + "'");
  }
}

template <class T>
T get_or(const Json& j, const std::string& path, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + path + "." + key + "' has the wrong type");
  }
}

Vec3 get_vec3(const Json& j, const std::string& path, const std::string& key,
              const Vec3& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 3)
    throw ConfigError("config key '" + path + "." + key + "' must be a 3-array");
  Vec3 v;
  for (int c = 0; c < 3; ++c) {
    if (!a[c].is_number())
      throw ConfigError("config key '" + path + "." + key + "' must hold numbers");
    v[c] = a[c].get<double>();
  }
  return v;
}

MetricSpec parse_metric(const Json& j) {
  MetricSpec m;
  check_keys(j, "metric",
             {"family", "epsilon", "bump_center", "bump_width", "box_radius",
              "derivative_scheme", "fd_step", "epsilon_max", "validation_points"});
  m.family = get_or<std::string>(j, "metric", "family", m.family);
  m.epsilon = get_or<double>(j, "metric", "epsilon", m.epsilon);
  m.bump_center = get_vec3(j, "metric", "bump_center", m.bump_center);
  m.bump_width = get_or<double>(j, "metric", "bump_width", m.bump_width);
  m.box_radius = get_or<double>(j, "metric", "box_radius", m.box_radius);
  const std::string scheme =
      get_or<std::string>(j, "metric", "derivative_scheme", "analytic");
  if (scheme == "analytic")
    m.scheme = DerivScheme::Analytic;
  else if (scheme == "central_difference")
    m.scheme = DerivScheme::CentralDifference;
  else
    throw ConfigError("metric.derivative_scheme must be 'analytic' or 'central_difference'");
  m.fd_step = get_or<double>(j, "metric", "fd_step", m.fd_step);
  m.epsilon_max = get_or<double>(j, "metric", "epsilon_max", m.epsilon_max);
  m.validation_points_per_axis =
      get_or<int>(j, "metric", "validation_points", m.validation_points_per_axis);
  return m;
}

SolverOptions parse_solver(const Json& j) {
  SolverOptions s;
  check_keys(j, "solver",
             {"ray_rtol", "ray_atol", "locate_tol", "max_locate_iters", "omega_fd_delta",
              "flat_closed_form", "ray_padding"});
  s.ray_rtol = get_or<double>(j, "solver", "ray_rtol", s.ray_rtol);
  s.ray_atol = get_or<double>(j, "solver", "ray_atol", s.ray_atol);
  s.locate_tol = get_or<double>(j, "solver", "locate_tol", s.locate_tol);
  s.max_locate_iters = get_or<int>(j, "solver", "max_locate_iters", s.max_locate_iters);
  s.omega_fd_delta = get_or<double>(j, "solver", "omega_fd_delta", s.omega_fd_delta);
  s.flat_closed_form = get_or<bool>(j, "solver", "flat_closed_form", s.flat_closed_form);
  s.ray_padding = get_or<double>(j, "solver", "ray_padding", s.ray_padding);
  return s;
}

StrichartzConfig parse_strichartz(const Json& j) {
  StrichartzConfig s;
  check_keys(j, "strichartz",
             {"pairs", "profile_radial", "profile_angular", "levels", "orders",
              "window_radius", "samples_per_osc", "single_constant_tol"});
  if (j.contains("pairs")) {
    s.pairs.clear();
    for (const auto& p : j.at("pairs")) {
      if (!p.is_array() || p.size() != 2)
        throw ConfigError("strichartz.pairs entries must be [p, q] string pairs");
      s.pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
  }
  s.profile_radial = get_or<std::string>(j, "strichartz", "profile_radial", s.profile_radial);
  s.profile_angular =
      get_or<std::string>(j, "strichartz", "profile_angular", s.profile_angular);
  s.levels = get_or<std::vector<int>>(j, "strichartz", "levels", s.levels);
  s.orders = get_or<std::vector<int>>(j, "strichartz", "orders", s.orders);
  s.scaling.window_radius =
      get_or<double>(j, "strichartz", "window_radius", s.scaling.window_radius);
  s.scaling.samples_per_osc =
      get_or<double>(j, "strichartz", "samples_per_osc", s.scaling.samples_per_osc);
  s.scaling.single_constant_tol = get_or<double>(j, "strichartz", "single_constant_tol",
                                                 s.scaling.single_constant_tol);
  return s;
}

KernelRunConfig parse_kernel(const Json& j) {
  KernelRunConfig k;
  check_keys(j, "kernel",
             {"j", "taus", "base_t", "base_x", "direction", "classify", "interior_fracs",
              "interior_extra_fracs", "exterior_fracs", "exterior_extra_fracs",
              "ratio_ceiling"});
  k.j = get_or<int>(j, "kernel", "j", k.j);
  k.taus = get_or<std::vector<double>>(j, "kernel", "taus", k.taus);
  k.ladder.base_t = get_or<double>(j, "kernel", "base_t", k.ladder.base_t);
  k.ladder.base_x = get_vec3(j, "kernel", "base_x", k.ladder.base_x);
  k.ladder.direction =
      normalized(get_vec3(j, "kernel", "direction", k.ladder.direction));
  k.ladder.classify = get_or<bool>(j, "kernel", "classify", k.ladder.classify);
  k.ladder.interior_fracs =
      get_or<std::vector<double>>(j, "kernel", "interior_fracs", k.ladder.interior_fracs);
  k.ladder.interior_extra_fracs = get_or<std::vector<double>>(
      j, "kernel", "interior_extra_fracs", k.ladder.interior_extra_fracs);
  k.ladder.exterior_fracs =
      get_or<std::vector<double>>(j, "kernel", "exterior_fracs", k.ladder.exterior_fracs);
  k.ladder.exterior_extra_fracs = get_or<std::vector<double>>(
      j, "kernel", "exterior_extra_fracs", k.ladder.exterior_extra_fracs);
  k.ratio_ceiling = get_or<double>(j, "kernel", "ratio_ceiling", k.ratio_ceiling);
  k.ladder.taus = k.taus;
  return k;
}

LemmaRunConfig parse_lemma(const Json& j) {
  LemmaRunConfig l;
  check_keys(j, "lemma",
             {"pairs_file", "n_random_pairs", "omega_level", "case4_constant",
              "tol_factor"});
  l.pairs_file = get_or<std::string>(j, "lemma", "pairs_file", l.pairs_file);
  l.n_random_pairs = get_or<int>(j, "lemma", "n_random_pairs", l.n_random_pairs);
  l.omega_level = get_or<int>(j, "lemma", "omega_level", l.omega_level);
  l.case4_constant = get_or<double>(j, "lemma", "case4_constant", l.case4_constant);
  l.tol_factor = get_or<double>(j, "lemma", "tol_factor", l.tol_factor);
  return l;
}

EikonalRunConfig parse_eikonal(const Json& j) {
  EikonalRunConfig e;
  check_keys(j, "eikonal",
             {"n_geodesics", "regularity_points", "residual_points", "omega_level",
              "slice_time"});
  e.n_geodesics = get_or<int>(j, "eikonal", "n_geodesics", e.n_geodesics);
  e.regularity_points = get_or<int>(j, "eikonal", "regularity_points", e.regularity_points);
  e.residual_points = get_or<int>(j, "eikonal", "residual_points", e.residual_points);
  e.omega_level = get_or<int>(j, "eikonal", "omega_level", e.omega_level);
  e.slice_time = get_or<double>(j, "eikonal", "slice_time", e.slice_time);
  return e;
}

}  // namespace

ExperimentConfig default_config() { return ExperimentConfig{}; }

ExperimentConfig parse_config(const Json& j) {
  check_keys(j, "config",
             {"schema_version", "seed", "output_dir", "threads", "strict", "metric",
              "solver", "omega_grid_level", "strichartz", "kernel", "lemma", "eikonal"});
  ExperimentConfig c;
  if (!j.contains("schema_version"))
    throw ConfigError("config.schema_version is required");
  c.schema_version = j.at("schema_version").get<int>();
  if (c.schema_version != 1)
    throw ConfigError("unsupported config schema_version " +
                      std::to_string(c.schema_version));
  c.seed = get_or<std::uint64_t>(j, "config", "seed", c.seed);
  c.output_dir = get_or<std::string>(j, "config", "output_dir", c.output_dir);
  c.threads = get_or<int>(j, "config", "threads", c.threads);
  c.strict = get_or<bool>(j, "config", "strict", c.strict);
  if (j.contains("metric")) c.metric = parse_metric(j.at("metric"));
  if (j.contains("solver")) c.solver = parse_solver(j.at("solver"));
  c.omega_grid_level = get_or<int>(j, "config", "omega_grid_level", c.omega_grid_level);
  if (j.contains("strichartz")) c.strichartz = parse_strichartz(j.at("strichartz"));
  if (j.contains("kernel")) c.kernel = parse_kernel(j.at("kernel"));
  if (j.contains("lemma")) c.lemma = parse_lemma(j.at("lemma"));
  if (j.contains("eikonal")) c.eikonal = parse_eikonal(j.at("eikonal"));

  // validate cheap preconditions before any compute starts
  if (c.omega_grid_level < 0 || c.omega_grid_level > 4)
    throw ConfigError("omega_grid_level must be in [0, 4]");
  if (c.kernel.j < 0 || c.kernel.j > 7) throw ConfigError("kernel.j must be in [0, 7]");
  for (int lvl : c.strichartz.levels)
    if (lvl < 0 || lvl > 7) throw ConfigError("strichartz.levels must be within [0, 7]");
  for (const auto& [p, q] : c.strichartz.pairs)
    admissible(Rational::parse(p), Rational::parse(q));
  FrequencyProfile::parse(c.strichartz.profile_radial, c.strichartz.profile_angular);
  return c;
}

ExperimentConfig load_config_file(const std::string& path) {
  return parse_config(load_json_file(path));
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["schema_version"] = schema_version;
  j["seed"] = seed;
  j["output_dir"] = output_dir;
  j["threads"] = threads;
  j["strict"] = strict;
  Json m;
  m["family"] = metric.family;
  m["epsilon"] = metric.epsilon;
  m["bump_center"] = {metric.bump_center[0], metric.bump_center[1], metric.bump_center[2]};
  m["bump_width"] = metric.bump_width;
  m["box_radius"] = metric.box_radius;
  m["derivative_scheme"] =
      metric.scheme == DerivScheme::Analytic ? "analytic" : "central_difference";
  m["fd_step"] = metric.fd_step;
  m["epsilon_max"] = metric.epsilon_max;
  j["metric"] = m;
  Json s;
  s["ray_rtol"] = solver.ray_rtol;
  s["ray_atol"] = solver.ray_atol;
  s["locate_tol"] = solver.locate_tol;
  s["omega_fd_delta"] = solver.omega_fd_delta;
  s["flat_closed_form"] = solver.flat_closed_form;
  j["solver"] = s;
  j["omega_grid_level"] = omega_grid_level;
  Json st;
  Json pairs = Json::array();
  for (const auto& [p, q] : strichartz.pairs) pairs.push_back({p, q});
  st["pairs"] = pairs;
  st["profile_radial"] = strichartz.profile_radial;
  st["profile_angular"] = strichartz.profile_angular;
  st["levels"] = strichartz.levels;
  st["orders"] = strichartz.orders;
  st["window_radius"] = strichartz.scaling.window_radius;
  st["samples_per_osc"] = strichartz.scaling.samples_per_osc;
  j["strichartz"] = st;
  Json k;
  k["j"] = kernel.j;
  k["taus"] = kernel.taus;
  k["base_t"] = kernel.ladder.base_t;
  k["base_x"] = {kernel.ladder.base_x[0], kernel.ladder.base_x[1], kernel.ladder.base_x[2]};
  k["direction"] = {kernel.ladder.direction[0], kernel.ladder.direction[1],
                    kernel.ladder.direction[2]};
  k["classify"] = kernel.ladder.classify;
  k["ratio_ceiling"] = kernel.ratio_ceiling;
  j["kernel"] = k;
  Json l;
  l["pairs_file"] = lemma.pairs_file;
  l["n_random_pairs"] = lemma.n_random_pairs;
  l["omega_level"] = lemma.omega_level;
  l["case4_constant"] = lemma.case4_constant;
  l["tol_factor"] = lemma.tol_factor;
  j["lemma"] = l;
  Json e;
  e["n_geodesics"] = eikonal.n_geodesics;
  e["regularity_points"] = eikonal.regularity_points;
  e["residual_points"] = eikonal.residual_points;
  e["omega_level"] = eikonal.omega_level;
  e["slice_time"] = eikonal.slice_time;
  j["eikonal"] = e;
  return j;
}

}  // namespace wavegeom
