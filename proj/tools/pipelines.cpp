#include "pipelines.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include "wavegeom/field_io.hpp"
#include "wavegeom/phase_geometry.hpp"
#include "wavegeom/rng.hpp"

namespace wavegeom::pipelines {

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(Json& sink) : sink_(&sink) {}
  template <class F>
  auto stage(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record(name, t0);
    } else {
      auto r = f();
      record(name, t0);
      return r;
    }
  }

 private:
  void record(const std::string& name, std::chrono::steady_clock::time_point t0) {
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    (*sink_)[name] = dt;
  }
  Json* sink_;
};

struct Checks {
  Json list = Json::array();
  int failed = 0;

  void add(const std::string& name, double value, double threshold, bool pass) {
    Json c;
    c["name"] = name;
    c["value"] = value;
    c["threshold"] = threshold;
    c["pass"] = pass;
    list.push_back(c);
    if (!pass) ++failed;
  }
  void leq(const std::string& name, double value, double threshold) {
    add(name, value, threshold, value <= threshold);
  }
  void in_band(const std::string& name, double value, double lo, double hi) {
    Json c;
    c["name"] = name;
    c["value"] = value;
    c["band"] = {lo, hi};
    c["pass"] = value >= lo && value <= hi;
    list.push_back(c);
    if (!(value >= lo && value <= hi)) ++failed;
  }
};

Json base_report(const char* pipeline, const ExperimentConfig& cfg) {
  Json r;
  r["schema_version"] = 1;
  r["pipeline"] = pipeline;
  r["config_hash"] = cfg.hash();
  r["seed"] = cfg.seed;
  r["metric"] = {{"family", cfg.metric.family}, {"epsilon", cfg.metric.epsilon}};
  return r;
}

std::string region_name(Region r) {
  switch (r) {
    case Region::OnS: return "on_sphere";
    case Region::Interior: return "interior";
    default: return "exterior";
  }
}

// flat-exactness sweep used by run-flat
void flat_exactness_checks(const ExperimentConfig& cfg, Checks& checks, int n_axis,
                           int n_time) {
  MetricSpec spec = cfg.metric;
  spec.family = "minkowski";
  spec.epsilon = 0.0;
  const auto metric = SpacetimeMetric::make(spec);
  SolverOptions sopt = cfg.solver;
  sopt.flat_closed_form = false;  // exercise the characteristic path
  OpticalSolver solver(metric, sopt);

  Rng rng(cfg.seed);
  double u_err = 0.0, b_err = 0.0, n_err = 0.0, l_err = 0.0, du_err = 0.0;
  double gamma_err = 0.0, detg_err = 0.0, hess_u = 0.0;
  const double extent = 0.6 * spec.box_radius;
  for (int it = 0; it < n_time; ++it) {
    const double t = n_time == 1 ? 0.0 : static_cast<double>(it) / (n_time - 1);
    const Vec3 w = rng.direction();
    const TangentFrame f = frame_at(w);
    for (int ix = 0; ix < n_axis; ++ix)
      for (int iy = 0; iy < n_axis; ++iy)
        for (int iz = 0; iz < n_axis; ++iz) {
          const Vec3 x{-extent + 2 * extent * ix / (n_axis - 1.0),
                       -extent + 2 * extent * iy / (n_axis - 1.0),
                       -extent + 2 * extent * iz / (n_axis - 1.0)};
          const auto pd = solver.evaluate(t, x, w);
          u_err = std::max(u_err, std::abs(pd.u - (-t + dot(x, w))));
          b_err = std::max(b_err, std::abs(pd.b - 1.0));
          n_err = std::max(n_err, norm(pd.N - w));
          l_err = std::max(l_err, std::abs(pd.L[0] - 1.0) + norm(pd.L.spatial() - w));
          const Vec3 x0 = x - w * t;
          du_err = std::max(du_err, std::abs(pd.domega_u[0] - dot(x0, f.e1)) +
                                        std::abs(pd.domega_u[1] - dot(x0, f.e2)));
          const auto G = metric.christoffel(t, x);
          for (int a = 0; a < 4; ++a)
            for (int b2 = 0; b2 < 4; ++b2)
              for (int c = 0; c < 4; ++c)
                gamma_err = std::max(gamma_err, std::abs(G(a, b2, c)));
          detg_err = std::max(
              detg_err, std::abs(metric.foliation(t, x).volume_density - 1.0));
        }
  }
  // second derivatives of u vanish: difference the transported gradient
  for (int i = 0; i < 8; ++i) {
    const double t = rng.uniform(0.1, 0.9);
    const Vec3 x = rng.in_box(2.0);
    const Vec3 w = rng.direction();
    const double h = 1e-3;
    for (int c = 0; c < 3; ++c) {
      Vec3 xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      const auto pp = solver.evaluate(t, xp, w);
      const auto pm = solver.evaluate(t, xm, w);
      for (int a = 0; a < 3; ++a)
        hess_u = std::max(hess_u,
                          std::abs(pp.N[a] / pp.b - pm.N[a] / pm.b) / (2.0 * h));
    }
  }
  checks.leq("flat.u_closed_form", u_err, 1e-12);
  checks.leq("flat.b_equals_1", b_err, 1e-12);
  checks.leq("flat.N_equals_omega", n_err, 1e-12);
  checks.leq("flat.L_equals_T_plus_omega", l_err, 1e-12);
  checks.leq("flat.domega_u_closed_form", du_err, 1e-12);
  checks.leq("flat.christoffel_zero", gamma_err, 1e-12);
  checks.leq("flat.det_g_equals_1", detg_err, 1e-12);
  checks.leq("flat.hessian_u_zero", hess_u, 1e-8);
}

void eikonal_identity_checks(const ExperimentConfig& cfg, const SpacetimeMetric& metric,
                             Checks& checks, Json& rep) {
  OpticalSolver solver(metric, cfg.solver);
  Rng rng(cfg.seed + 1);
  const double eps = metric.epsilon();

  // residual of the eikonal equation from field differences
  double residual = 0.0;
  for (int i = 0; i < cfg.eikonal.residual_points; ++i) {
    const double t = rng.uniform(0.1, 0.9);
    const Vec3 x = rng.in_box(0.4 * metric.spec().box_radius);
    residual = std::max(residual, solver.eikonal_residual_fd(t, x, rng.direction(), 1e-3));
  }
  checks.leq("eikonal.residual_fd", residual, metric.flat() ? 1e-12 : 1e-6);

  // constancy of u and d_omega u along geodesics, and null defect
  double u_defect = 0.0, du_defect = 0.0, null_defect = 0.0, time_defect = 0.0;
  const int n_geo = cfg.eikonal.n_geodesics;
  for (int i = 0; i < n_geo; ++i) {
    const Vec3 x0 = rng.in_box(0.35 * metric.spec().box_radius);
    const Vec3 w = rng.direction();
    const auto geo = solver.shoot(0.0, x0, w, 1.0, 7);
    null_defect = std::max(null_defect, geo.max_null_defect());
    time_defect = std::max(time_defect, geo.max_time_param_defect());
    const auto base = solver.evaluate(0.0, x0, w);
    for (const auto& s : geo.samples) {
      const auto pd = solver.evaluate(s.t, s.x, w);
      u_defect = std::max(u_defect, std::abs(pd.u - base.u));
      du_defect = std::max(du_defect, norm(pd.domega_u - base.domega_u));
    }
  }
  checks.leq("eikonal.null_defect", null_defect, 1e-8);
  checks.leq("eikonal.time_parametrization_defect", time_defect, 1e-10);
  checks.leq("eikonal.u_constancy", u_defect, metric.flat() ? 1e-12 : 1e-6);
  checks.leq("eikonal.domega_u_constancy", du_defect, metric.flat() ? 1e-12 : 1e-6);

  // regularity assumptions over an icosahedral grid
  std::vector<Vec3> pts;
  for (int i = 0; i < cfg.eikonal.regularity_points; ++i)
    pts.push_back(rng.in_box(0.35 * metric.spec().box_radius));
  const auto reg = verify_regularity(solver, icosphere_directions(cfg.eikonal.omega_level),
                                     pts, cfg.eikonal.slice_time);
  Json regj;
  regj["sup_b_minus_1"] = reg.sup_b_minus_1;
  regj["sup_domega_b"] = reg.sup_domega_b;
  regj["sup_gram_deviation"] = reg.sup_gram_deviation;
  regj["sup_g_N_domega_N"] = reg.sup_g_N_domega_N;
  regj["ad1_ratio_min"] = reg.ad1_ratio_min;
  regj["ad1_ratio_max"] = reg.ad1_ratio_max;
  regj["n_pairs"] = reg.n_pairs;
  rep["regularity"] = regj;
  const double cap = metric.flat() ? 1e-8 : 2.0 * eps;
  checks.leq("regularity.sup_b_minus_1", reg.sup_b_minus_1, cap);
  checks.leq("regularity.sup_domega_b", reg.sup_domega_b, cap);
  checks.leq("regularity.sup_gram_deviation", reg.sup_gram_deviation, cap);
  checks.leq("regularity.sup_g_N_domega_N", reg.sup_g_N_domega_N,
             metric.flat() ? 1e-8 : 1e-6);
  checks.in_band("regularity.ad1_ratio", reg.ad1_ratio_min, 1.0 - cap, 1.0 + cap);
  checks.in_band("regularity.ad1_ratio_max", reg.ad1_ratio_max, 1.0 - cap, 1.0 + cap);

  // global coordinates on a slice
  std::vector<Vec3> cloud;
  for (int i = 0; i < 10; ++i) cloud.push_back(rng.in_box(0.3 * metric.spec().box_radius));
  const auto gc =
      check_global_coordinates(solver, rng.direction(), cfg.eikonal.slice_time, cloud);
  rep["global_coordinates"] = {{"sqrt_det_min", gc.sqrt_det_min},
                               {"sqrt_det_max", gc.sqrt_det_max},
                               {"injective", gc.injective}};
  checks.in_band("global_coords.sqrt_det", gc.sqrt_det_min, 0.5, 2.0);
  checks.in_band("global_coords.sqrt_det_max", gc.sqrt_det_max, 0.5, 2.0);
  checks.add("global_coords.injective", gc.injective ? 1.0 : 0.0, 1.0, gc.injective);

  // caustic guard
  const double ratio = min_ray_separation_ratio(solver, rng.direction(), 0.4,
                                                0.3 * metric.spec().box_radius, 4, 1.0);
  rep["ray_separation_ratio"] = ratio;
  checks.in_band("eikonal.ray_separation_ratio", ratio, 0.5, 1.5);
}

void write_run_outputs(const std::string& out_dir, Result& result) {
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir + "/report.json", json_dump(result.report));
  write_text_file(out_dir + "/timings.json", json_dump(result.timings));
  result.artifacts.insert(result.artifacts.begin(), "report.json");
}

}  // namespace

Result run_flat(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  Result result;
  Stopwatch watch(result.timings);
  result.report = base_report("run-flat", cfg);
  Checks checks;

  watch.stage("flat_exactness", [&] { flat_exactness_checks(cfg, checks, 7, 4); });

  MetricSpec spec = cfg.metric;
  spec.family = "minkowski";
  spec.epsilon = 0.0;
  const auto metric = SpacetimeMetric::make(spec);
  watch.stage("volume", [&] {
    const auto vol = check_volume_comparison(metric, 7, 4);
    result.report["volume"] = {{"n_min", vol.n_min}, {"n_max", vol.n_max}};
    checks.in_band("volume.lapse_min", vol.n_min, 1.0 - 1e-14, 1.0 + 1e-14);
    checks.in_band("volume.lapse_max", vol.n_max, 1.0 - 1e-14, 1.0 + 1e-14);
  });
  watch.stage("eikonal", [&] {
    ExperimentConfig flat_cfg = cfg;
    flat_cfg.metric = spec;
    eikonal_identity_checks(flat_cfg, metric, checks, result.report);
  });

  result.report["checks"] = checks.list;
  result.failed_checks = checks.failed;
  write_run_outputs(out_dir, result);
  return result;
}

Result run_perturbed(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  Result result;
  Stopwatch watch(result.timings);
  result.report = base_report("run-perturbed", cfg);
  Checks checks;

  MetricSpec spec = cfg.metric;
  if (spec.family == "minkowski" || spec.epsilon == 0.0) {
    spec.family = "bump";
    if (spec.epsilon == 0.0) spec.epsilon = 0.05;
  }
  const auto metric = SpacetimeMetric::make(spec);
  result.report["metric"] = {{"family", spec.family}, {"epsilon", spec.epsilon}};

  watch.stage("volume", [&] {
    const auto vol = check_volume_comparison(metric, 9, 5);
    result.report["volume"] = {{"n_min", vol.n_min}, {"n_max", vol.n_max}};
    checks.in_band("volume.lapse_min", vol.n_min, 0.5, 2.0);
    checks.in_band("volume.lapse_max", vol.n_max, 0.5, 2.0);
    checks.in_band("volume.lapse_band", vol.n_max, 1.0 - 1.5 * spec.epsilon,
                   1.0 + 1.5 * spec.epsilon);
  });
  ExperimentConfig pcfg = cfg;
  pcfg.metric = spec;
  watch.stage("eikonal", [&] {
    eikonal_identity_checks(pcfg, metric, checks, result.report);
  });
  watch.stage("field_snapshot", [&] {
    OpticalSolver solver(metric, cfg.solver);
    GridSpec grid;
    grid.nt = 3;
    grid.nx = grid.ny = grid.nz = 5;
    grid.lo = Vec3{-1, -1, -1};
    grid.hi = Vec3{1, 1, 1};
    Rng rng(cfg.seed + 7);
    const auto field = sample_optical_field(solver, rng.direction(), grid, cfg.threads);
    write_optical_field(out_dir + "/optical_field.wgof", field);
    result.artifacts.push_back("optical_field.wgof");
    result.artifacts.push_back("optical_field.wgof.json");
  });

  result.report["checks"] = checks.list;
  result.failed_checks = checks.failed;
  write_run_outputs(out_dir, result);
  return result;
}

Result verify_eikonal(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  Result result;
  Stopwatch watch(result.timings);
  result.report = base_report("verify-eikonal", cfg);
  Checks checks;
  const auto metric = SpacetimeMetric::make(cfg.metric);
  watch.stage("eikonal", [&] {
    eikonal_identity_checks(cfg, metric, checks, result.report);
  });
  result.report["checks"] = checks.list;
  result.failed_checks = checks.failed;
  write_run_outputs(out_dir, result);
  return result;
}

Result verify_lemma(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  Result result;
  Stopwatch watch(result.timings);
  result.report = base_report("verify-lemma", cfg);
  Checks checks;

  const auto metric = SpacetimeMetric::make(cfg.metric);
  OpticalSolver solver(metric, cfg.solver);

  std::vector<PhasePair> pairs;
  bool empty_input = false;
  if (!cfg.lemma.pairs_file.empty()) {
    const Json j = load_json_file(cfg.lemma.pairs_file);
    if (!j.is_array()) throw ConfigError("pairs file must hold a JSON array");
    for (const auto& e : j) {
      PhasePair p;
      p.t = e.at("t").get<double>();
      p.s = e.at("s").get<double>();
      const auto& xa = e.at("x");
      const auto& ya = e.at("y");
      for (int c = 0; c < 3; ++c) {
        p.x[c] = xa[c].get<double>();
        p.y[c] = ya[c].get<double>();
      }
      pairs.push_back(p);
    }
    empty_input = pairs.empty();
  } else {
    Rng rng(cfg.seed + 11);
    for (int i = 0; i < cfg.lemma.n_random_pairs; ++i) {
      PhasePair p;
      p.t = rng.uniform(0.05, 0.35);
      p.s = rng.uniform(0.6, 0.95);
      p.x = rng.in_box(0.15 * metric.spec().box_radius);
      // stratify across the three regions
      const double frac = (i % 3 == 0) ? 1.0 : (i % 3 == 1 ? 0.55 : 1.55);
      if (i % 3 == 0) {
        const Vec3 w = rng.direction();
        const auto geo = solver.shoot(p.t, p.x, w, p.s - p.t, 2);
        p.y = geo.samples.back().x;
      } else {
        p.y = p.x + rng.direction() * (frac * (p.s - p.t));
      }
      pairs.push_back(p);
    }
  }

  CsvWriter csv({"pair", "region", "omega_x", "omega_y", "omega_z", "case", "theta",
                 "theta1", "abs_phi", "bound", "margin"});
  double min_margin = 1e300;
  int n_samples = 0;
  KeyLemmaOptions kopt;
  kopt.case4_constant = cfg.lemma.case4_constant;
  kopt.tol_factor = cfg.lemma.tol_factor;
  const auto omegas = icosphere_directions(cfg.lemma.omega_level);
  watch.stage("lemma_sweep", [&] {
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      const auto& pair = pairs[pi];
      const auto dec = decompose(solver, pair);
      const auto samples = check_key_lemma(solver, pair, dec, omegas, kopt);
      for (const auto& ks : samples) {
        csv.row({CsvWriter::cell(static_cast<int>(pi)), region_name(dec.region),
                 CsvWriter::cell(ks.omega[0]), CsvWriter::cell(ks.omega[1]),
                 CsvWriter::cell(ks.omega[2]),
                 CsvWriter::cell(static_cast<int>(ks.lemma_case)),
                 CsvWriter::cell(ks.theta), CsvWriter::cell(ks.theta1),
                 CsvWriter::cell(std::abs(ks.phi_value)), CsvWriter::cell(ks.bound_value),
                 CsvWriter::cell(ks.margin)});
        const double tol = kopt.tol_factor * (pair.s - pair.t);
        min_margin = std::min(min_margin, ks.margin + tol);
        ++n_samples;
      }
    }
  });
  std::filesystem::create_directories(out_dir);
  csv.write(out_dir + "/lemma_samples.csv");
  result.artifacts.push_back("lemma_samples.csv");

  result.report["n_pairs"] = pairs.size();
  result.report["n_samples"] = n_samples;
  if (empty_input) result.report["warning"] = "empty pairs file: nothing to verify";
  if (n_samples > 0) {
    result.report["min_margin_with_tolerance"] = min_margin;
    checks.add("lemma.lower_bounds_hold", min_margin, 0.0, min_margin >= 0.0);
  }
  result.report["checks"] = checks.list;
  result.failed_checks = checks.failed;
  write_run_outputs(out_dir, result);
  return result;
}

Result kernel_decay(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  Result result;
  Stopwatch watch(result.timings);
  result.report = base_report("kernel-decay", cfg);
  Checks checks;

  const auto metric = SpacetimeMetric::make(cfg.metric);
  OpticalSolver solver(metric, cfg.solver);
  KernelEvaluator kern(solver, KernelConfig{cfg.kernel.j, nullptr});
  DecayLadderConfig ladder = cfg.kernel.ladder;
  ladder.taus = cfg.kernel.taus;

  const auto rep = watch.stage("decay_sweep", [&] { return check_dispersive(kern, ladder); });

  CsvWriter csv({"region", "tau", "frac", "abs_k", "majorant", "ratio"});
  for (const auto& row : rep.rows)
    csv.row({region_name(row.region), CsvWriter::cell(row.tau), CsvWriter::cell(row.frac),
             CsvWriter::cell(row.abs_k), CsvWriter::cell(row.majorant),
             CsvWriter::cell(row.ratio)});
  std::filesystem::create_directories(out_dir);
  csv.write(out_dir + "/kernel_decay.csv");
  result.artifacts.push_back("kernel_decay.csv");

  Json regions = Json::array();
  for (const auto& rd : rep.regions) {
    Json r;
    r["region"] = region_name(rd.region);
    r["slope"] = rd.slope;
    r["max_ratio"] = rd.max_ratio;
    regions.push_back(r);
    checks.in_band("kernel.slope." + region_name(rd.region), rd.slope, -1.15, -0.85);
    checks.leq("kernel.ratio." + region_name(rd.region), rd.max_ratio,
               cfg.kernel.ratio_ceiling);
  }
  result.report["j"] = rep.j;
  result.report["regions"] = regions;
  result.report["majorant_violation"] = rep.majorant_violation;
  checks.leq("kernel.majorant_violation", rep.majorant_violation, 0.0);

  result.report["checks"] = checks.list;
  result.failed_checks = checks.failed;
  write_run_outputs(out_dir, result);
  return result;
}

Result strichartz_scaling(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  Result result;
  Stopwatch watch(result.timings);
  result.report = base_report("strichartz-scaling", cfg);
  Checks checks;

  MetricSpec spec = cfg.metric;
  spec.family = "minkowski";
  spec.epsilon = 0.0;
  const auto metric = SpacetimeMetric::make(spec);
  OpticalSolver solver(metric, cfg.solver);
  const auto profile =
      FrequencyProfile::parse(cfg.strichartz.profile_radial, cfg.strichartz.profile_angular);

  CsvWriter csv({"p", "q", "order", "j", "norm", "data_norm", "ratio"});
  Json reports = Json::array();
  ScalingOptions sopt = cfg.strichartz.scaling;
  sopt.threads = cfg.threads;
  for (const auto& [ps, qs] : cfg.strichartz.pairs) {
    const auto pair = admissible(Rational::parse(ps), Rational::parse(qs));
    for (int order : cfg.strichartz.orders) {
      const std::string tag = ps + "," + qs + ",order" + std::to_string(order);
      const auto rep = watch.stage("scaling_" + tag, [&] {
        return scaling_regression(solver, profile, pair, cfg.strichartz.levels, order, sopt);
      });
      Json r;
      r["p"] = ps;
      r["q"] = qs;
      r["order"] = order;
      r["target_r"] = rep.target_r;
      r["slope"] = rep.slope;
      r["residual"] = rep.residual;
      r["fitted_C"] = rep.fitted_C;
      r["max_ratio_excess"] = rep.max_ratio_excess;
      r["single_constant_ok"] = rep.single_constant_ok;
      r["tail_fraction"] = rep.tail_fraction;
      Json per = Json::array();
      for (const auto& ln : rep.per_j) {
        per.push_back({{"j", ln.j},
                       {"norm", ln.norm},
                       {"data_norm", ln.data_norm},
                       {"ratio", ln.ratio}});
        csv.row({ps, qs, CsvWriter::cell(order), CsvWriter::cell(ln.j),
                 CsvWriter::cell(ln.norm), CsvWriter::cell(ln.data_norm),
                 CsvWriter::cell(ln.ratio)});
      }
      r["per_j"] = per;
      reports.push_back(r);
      checks.leq("strichartz.slope." + tag, rep.slope, rep.target_r + 0.1);
      checks.add("strichartz.single_constant." + tag, rep.max_ratio_excess,
                 sopt.single_constant_tol, rep.single_constant_ok);
    }
  }
  std::filesystem::create_directories(out_dir);
  csv.write(out_dir + "/strichartz_per_level.csv");
  result.artifacts.push_back("strichartz_per_level.csv");
  result.report["norm_reports"] = reports;

  result.report["checks"] = checks.list;
  result.failed_checks = checks.failed;
  write_run_outputs(out_dir, result);
  return result;
}

Result emit_plot_data(const std::vector<std::string>& csv_paths, const std::string& out_dir,
                      const std::string& out_name) {
  Result result;
  if (csv_paths.empty()) throw ConfigError("emit-plot-data needs at least one csv path");

  std::vector<std::string> merged_header;
  CsvWriter* writer = nullptr;
  std::unique_ptr<CsvWriter> owned;
  for (const auto& path : csv_paths) {
    const CsvTable table = read_csv(path);
    // run metadata sits next to the artifact
    const auto dir = std::filesystem::path(path).parent_path();
    const Json meta = load_json_file((dir / "report.json").string());
    const std::string run = std::to_string(meta.at("config_hash").get<std::uint64_t>());
    const std::string family = meta.at("metric").at("family").get<std::string>();
    const double eps = meta.at("metric").at("epsilon").get<double>();

    if (!writer) {
      merged_header = {"run", "family", "epsilon"};
      for (const auto& h : table.header) merged_header.push_back(h);
      owned = std::make_unique<CsvWriter>(merged_header);
      writer = owned.get();
    } else {
      std::vector<std::string> expect(merged_header.begin() + 3, merged_header.end());
      if (table.header != expect) {
        std::string offending = "column count";
        for (std::size_t i = 0; i < std::min(expect.size(), table.header.size()); ++i)
          if (table.header[i] != expect[i]) {
            offending = table.header[i];
            break;
          }
        throw SchemaMismatchError("csv schema mismatch in '" + path + "' at column '" +
                                  offending + "'");
      }
    }
    for (const auto& r : table.rows) {
      std::vector<std::string> row = {run, family, CsvWriter::cell(eps)};
      row.insert(row.end(), r.begin(), r.end());
      writer->row(row);
    }
  }
  std::filesystem::create_directories(out_dir);
  owned->write(out_dir + "/" + out_name);
  result.artifacts.push_back(out_name);
  result.report["pipeline"] = "emit-plot-data";
  result.report["inputs"] = csv_paths;
  result.report["rows"] = owned->rows();
  return result;
}

}  // namespace wavegeom::pipelines
