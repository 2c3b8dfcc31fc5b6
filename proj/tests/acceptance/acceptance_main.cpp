// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <vector>

#include "pipelines.hpp"
#include "wavegeom/field_io.hpp"
#include "wavegeom/kernel.hpp"
#include "wavegeom/phase_geometry.hpp"
#include "wavegeom/rng.hpp"
#include "wavegeom/strichartz.hpp"

using namespace wavegeom;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<Criterion> g_results;

template <class F>
void run_criterion(int id, const std::string& name, double budget_seconds, F&& body) {
  Criterion c;
  c.id = id;
  c.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream detail;
  try {
    c.pass = body(detail);
  } catch (const std::exception& e) {
    c.pass = false;
    detail << " exception: " << e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_seconds > 0.0 && c.seconds > budget_seconds) {
    c.pass = false;
    detail << " [runtime " << c.seconds << " s exceeds budget " << budget_seconds << " s]";
  }
  c.detail = detail.str();
  std::printf("[%s] criterion %d: %s (%.1f s)%s\n", c.pass ? "PASS" : "FAIL", id,
              name.c_str(), c.seconds, c.detail.c_str());
  std::fflush(stdout);
  g_results.push_back(c);
}

MetricSpec bump_spec(double eps) {
  MetricSpec s;
  s.family = "bump";
  s.epsilon = eps;
  return s;
}

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------- criterion 1
bool criterion_flat_exactness(std::ostream& out) {
  const auto metric = SpacetimeMetric::make(MetricSpec{});
  SolverOptions sopt;
  sopt.flat_closed_form = false;  // drive the characteristic machinery
  OpticalSolver solver(metric, sopt);
  const Vec3 w = normalized(Vec3{0.3, -0.5, 0.81});
  const TangentFrame frame = frame_at(w);

  double dev = 0.0;
  const int n_axis = 17, n_time = 9;
  const double extent = 2.4;
  for (int it = 0; it < n_time; ++it) {
    const double t = static_cast<double>(it) / (n_time - 1);
    for (int ix = 0; ix < n_axis; ++ix)
      for (int iy = 0; iy < n_axis; ++iy)
        for (int iz = 0; iz < n_axis; ++iz) {
          const Vec3 x{-extent + 2 * extent * ix / (n_axis - 1.0),
                       -extent + 2 * extent * iy / (n_axis - 1.0),
                       -extent + 2 * extent * iz / (n_axis - 1.0)};
          const auto pd = solver.evaluate(t, x, w);
          dev = std::max(dev, std::abs(pd.u - (-t + dot(x, w))));
          dev = std::max(dev, std::abs(pd.b - 1.0));
          dev = std::max(dev, norm(pd.N - w));
          const Vec3 x0 = x - w * t;
          dev = std::max(dev, std::abs(pd.domega_u[0] - dot(x0, frame.e1)));
          dev = std::max(dev, std::abs(pd.domega_u[1] - dot(x0, frame.e2)));
          const auto G = metric.christoffel(t, x);
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
              for (int cc = 0; cc < 4; ++cc) dev = std::max(dev, std::abs(G(a, b, cc)));
          dev = std::max(dev, std::abs(metric.foliation(t, x).volume_density - 1.0));
        }
  }
  // second derivatives of u vanish: difference the transported gradient
  Rng rng(101);
  double hess = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double t = rng.uniform(0.1, 0.9);
    const Vec3 x = rng.in_box(2.0);
    const double h = 1e-3;
    for (int cdir = 0; cdir < 3; ++cdir) {
      Vec3 xp = x, xm = x;
      xp[cdir] += h;
      xm[cdir] -= h;
      const auto pp = solver.evaluate(t, xp, w);
      const auto pm = solver.evaluate(t, xm, w);
      for (int a = 0; a < 3; ++a)
        hess = std::max(hess, std::abs(pp.N[a] / pp.b - pm.N[a] / pm.b) / (2.0 * h));
    }
  }
  dev = std::max(dev, hess);
  out << " max deviation " << dev << " on 17^3 x 9 grid";
  return dev <= 1e-12;
}

// ---------------------------------------------------------------- criterion 2
bool criterion_eikonal_identities(std::ostream& out) {
  const auto metric = SpacetimeMetric::make(bump_spec(0.05));
  OpticalSolver solver(metric);
  Rng rng(102);

  double residual = 0.0;
  for (int i = 0; i < 30; ++i)
    residual = std::max(residual, solver.eikonal_residual_fd(rng.uniform(0.1, 0.9),
                                                             rng.in_box(1.6),
                                                             rng.direction(), 1e-3));

  double u_def = 0.0, du_def = 0.0;
  const auto dirs42 = icosphere_directions(1);
  for (const auto& w : dirs42) {
    const Vec3 x0 = rng.in_box(1.3);
    const auto geo = solver.shoot(0.0, x0, w, 1.0, 6);
    const auto base = solver.evaluate(0.0, x0, w);
    for (const auto& s : geo.samples) {
      const auto pd = solver.evaluate(s.t, s.x, w);
      u_def = std::max(u_def, std::abs(pd.u - base.u));
      du_def = std::max(du_def, norm(pd.domega_u - base.domega_u));
    }
  }

  double gNdN = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto od =
        solver.omega_derivatives(rng.uniform(0.1, 0.9), rng.in_box(1.4), rng.direction());
    gNdN = std::max({gNdN, std::abs(od.g_N_domega_N[0]), std::abs(od.g_N_domega_N[1])});
  }

  // regularity constants under the epsilon sweep (same samples for each run)
  std::vector<Vec3> pts;
  for (int i = 0; i < 3; ++i) pts.push_back(rng.in_box(1.2));
  const auto dirs = icosphere_directions(1);
  const double eps_list[3] = {0.025, 0.05, 0.1};
  double Cb[3], Cdb[3], Cg[3];
  for (int k = 0; k < 3; ++k) {
    const auto m = SpacetimeMetric::make(bump_spec(eps_list[k]));
    OpticalSolver s(m);
    const auto rep = verify_regularity(s, dirs, pts, 0.6);
    Cb[k] = rep.sup_b_minus_1 / eps_list[k];
    Cdb[k] = rep.sup_domega_b / eps_list[k];
    Cg[k] = rep.sup_gram_deviation / eps_list[k];
  }
  double stability = 0.0;
  for (const auto& C : {Cb, Cdb, Cg})
    for (int k : {0, 2})
      stability = std::max(stability, std::abs(C[k] / C[1] - 1.0));

  out << " residual " << residual << ", u-constancy " << u_def << ", domega_u-constancy "
      << du_def << ", g(N,dN) " << gNdN << ", C(b)=" << Cb[1] << " C(db)=" << Cdb[1]
      << " C(gram)=" << Cg[1] << ", C instability " << stability;
  return residual <= 1e-6 && u_def <= 1e-6 && du_def <= 1e-6 && gNdN <= 1e-6 &&
         stability <= 0.2;
}

// ---------------------------------------------------------------- criterion 3
bool criterion_connecting_curves(std::ostream& out) {
  DecomposeOptions dopt;
  dopt.n_azimuth = 4;
  CurveOptions copt;

  double worst_defect = 0.0, worst_affine = 0.0;
  int n_pairs = 0;

  for (double eps : {0.0, 0.05}) {
    const auto metric =
        eps == 0.0 ? SpacetimeMetric::make(MetricSpec{}) : SpacetimeMetric::make(bump_spec(eps));
    OpticalSolver solver(metric);
    Rng rng(103);
    const int per_kind = eps == 0.0 ? 52 : 26;
    for (int i = 0; i < per_kind; ++i) {
      // interior pair and its mu curve
      {
        PhasePair pair;
        pair.t = rng.uniform(0.05, 0.3);
        pair.s = rng.uniform(0.6, 0.95);
        pair.x = rng.in_box(0.6);
        pair.y = pair.x + rng.direction() * (rng.uniform(0.1, 0.85) * (pair.s - pair.t));
        const auto dec = decompose(solver, pair, dopt);
        if (dec.region == Region::Interior) {
          const auto mu = integrate_mu(solver, pair, dec, copt);
          worst_defect = std::max(worst_defect, mu.endpoint_defect);
          worst_defect = std::max(worst_defect, mu.max_u_defect);
          worst_defect = std::max(worst_defect, mu.max_domega_defect);
          ++n_pairs;
        }
      }
      // exterior pair and its eta curve
      {
        PhasePair pair;
        pair.t = rng.uniform(0.05, 0.3);
        pair.s = rng.uniform(0.6, 0.95);
        pair.x = rng.in_box(0.5);
        pair.y = pair.x + rng.direction() * (rng.uniform(1.15, 1.9) * (pair.s - pair.t));
        const auto dec = decompose(solver, pair, dopt);
        if (dec.region == Region::Exterior) {
          const auto eta = integrate_eta(solver, pair, dec, dec.omega1_az0, copt);
          worst_defect = std::max(worst_defect, eta.endpoint_defect);
          worst_defect = std::max(worst_defect, eta.max_u_defect);
          worst_affine = std::max(worst_affine, eta.max_domega_defect);
          ++n_pairs;
        }
      }
    }
  }
  out << " " << n_pairs << " curves, worst endpoint/transport defect " << worst_defect
      << ", worst affine-law defect " << worst_affine;
  return n_pairs >= 100 && worst_defect <= 1e-6 && worst_affine <= 1e-6;
}

// ---------------------------------------------------------------- criterion 4
bool criterion_key_lemma(std::ostream& out) {
  DecomposeOptions dopt;
  dopt.n_azimuth = 4;

  const auto flat = SpacetimeMetric::make(MetricSpec{});
  OpticalSolver fsolver(flat);
  Rng rng(104);

  // fit the fourth-case constant on flat exterior configurations
  double c_fit = 1e300;
  for (int i = 0; i < 3; ++i) {
    PhasePair pair;
    pair.t = 0.1;
    pair.s = rng.uniform(0.7, 0.95);
    pair.x = rng.in_box(0.4);
    pair.y = pair.x + rng.direction() * (rng.uniform(1.3, 2.0) * (pair.s - pair.t));
    const auto dec = decompose(fsolver, pair, dopt);
    if (dec.region != Region::Exterior) continue;
    c_fit = std::min(c_fit, fit_case4_constant(fsolver, pair, dec, 24, 8));
  }

  const auto omegas = icosphere_directions(1);
  int n_samples = 0;
  int n_cases[4] = {0, 0, 0, 0};
  double worst_rel_margin = 1e300;     // min over samples of margin / (s-t)
  double flat_ons_dev = 0.0;           // closed-form match on the sphere case
  double c_perturbed = 1e300;          // measured fourth-case constant, eps > 0

  for (double eps : {0.0, 0.05}) {
    const auto metric =
        eps == 0.0 ? SpacetimeMetric::make(MetricSpec{}) : SpacetimeMetric::make(bump_spec(eps));
    OpticalSolver solver(metric);
    KeyLemmaOptions kopt;
    kopt.case4_constant = eps == 0.0 ? c_fit : 0.5 * c_fit;
    for (int i = 0; i < 12; ++i) {
      PhasePair pair;
      pair.t = rng.uniform(0.05, 0.3);
      pair.s = rng.uniform(0.6, 0.95);
      pair.x = rng.in_box(0.5);
      const int kind = i % 3;
      if (kind == 0) {
        const Vec3 w0 = rng.direction();
        const auto geo = solver.shoot(pair.t, pair.x, w0, pair.s - pair.t, 2);
        pair.y = geo.samples.back().x;
      } else if (kind == 1) {
        pair.y = pair.x + rng.direction() * (rng.uniform(0.0, 0.8) * (pair.s - pair.t));
      } else {
        pair.y = pair.x + rng.direction() * (rng.uniform(1.2, 1.9) * (pair.s - pair.t));
      }
      const auto dec = decompose(solver, pair, dopt);
      const auto samples = check_key_lemma(solver, pair, dec, omegas, kopt);
      for (const auto& ks : samples) {
        ++n_samples;
        ++n_cases[static_cast<int>(ks.lemma_case)];
        worst_rel_margin = std::min(worst_rel_margin, ks.margin / (pair.s - pair.t));
        if (eps == 0.0 && dec.region == Region::OnS) {
          const Vec3 d = ks.omega - dec.omega0;
          flat_ons_dev = std::max(
              flat_ons_dev, std::abs(std::abs(ks.phi_value) -
                                     0.5 * (pair.s - pair.t) * dot(d, d)));
        }
        if (eps > 0.0 && ks.lemma_case == LemmaCase::ExtNear && ks.bound_value > 1e-12) {
          // measured constant = |phi| / (shape * m0); bound carries c/2
          c_perturbed =
              std::min(c_perturbed, std::abs(ks.phi_value) / (ks.bound_value / (0.5 * c_fit)));
        }
      }
    }
  }

  out << " " << n_samples << " samples (cases " << n_cases[0] << "/" << n_cases[1] << "/"
      << n_cases[2] << "/" << n_cases[3] << "), worst margin/(s-t) " << worst_rel_margin
      << ", c_fit " << c_fit << ", perturbed c " << c_perturbed << ", flat sphere-case dev "
      << flat_ons_dev;
  bool all_cases = n_cases[0] > 0 && n_cases[1] > 0 && n_cases[2] > 0 && n_cases[3] > 0;
  return n_samples >= 1000 && all_cases && worst_rel_margin >= -1e-8 &&
         std::abs(c_fit - 1.0) <= 0.02 && c_perturbed >= 0.5 * c_fit &&
         flat_ons_dev <= 1e-10;
}

// ---------------------------------------------------------------- criterion 5
bool criterion_kernel_oracle(std::ostream& out) {
  const auto metric = SpacetimeMetric::make(MetricSpec{});
  OpticalSolver solver(metric);
  KernelEvaluator k3(solver, KernelConfig{3, nullptr});
  KernelEvaluator k2(solver, KernelConfig{2, nullptr});
  Rng rng(105);

  const double scale_ref = 4.0 * kPi * window_I0();
  double worst_rel = 0.0, majorant_excess = -1e300, worst_jdiff = 0.0;
  int n_jpairs = 0;
  for (int i = 0; i < 50; ++i) {
    RescaledPair pair;
    pair.t = rng.uniform(0.0, 2.0);
    pair.s = pair.t + rng.uniform(0.1, 5.5);
    pair.x = rng.in_box(5.0);
    pair.y = pair.x + rng.direction() * rng.uniform(0.0, 5.0);
    const auto reduced = k3.value_flat_reduced(pair);
    const auto generic = k3.value_generic(pair);
    worst_rel = std::max(worst_rel, std::abs(reduced - generic) / scale_ref);
    const auto ks = k3.eval(pair);
    majorant_excess =
        std::max(majorant_excess, std::abs(ks.value) - ks.ibp_majorant - 1e-4 * scale_ref);
    if (n_jpairs < 10 && pair.s <= 3.9) {
      // level independence at matched rescaled pairs (inside both slabs)
      const auto a = k2.value_generic(pair);
      worst_jdiff = std::max(worst_jdiff, std::abs(a - generic) / scale_ref);
      ++n_jpairs;
    }
  }
  out << " 3-D vs reduced rel dev " << worst_rel << ", majorant excess " << majorant_excess
      << ", j-independence dev " << worst_jdiff << " on " << n_jpairs << " pairs";
  return worst_rel <= 1e-6 && majorant_excess <= 0.0 && worst_jdiff <= 1e-6 && n_jpairs >= 8;
}

// ---------------------------------------------------------------- criterion 6
bool criterion_dispersive(std::ostream& out) {
  const std::vector<double> taus12 = {1.6,  1.96, 2.4,  2.95, 3.62, 4.44,
                                      5.45, 6.68, 8.2,  10.06, 12.34, 16.0};
  const std::vector<double> taus8 = {0.8, 1.1, 1.55, 2.15, 3.0, 4.15, 5.75, 8.0};

  auto make_ladder = [&](const std::vector<double>& taus) {
    DecayLadderConfig ladder;
    ladder.taus = taus;
    ladder.base_t = 0.0;
    ladder.base_x = Vec3{0.15, -0.1, 0.1};
    ladder.direction = normalized(Vec3{0.3, 0.2, 0.93});
    return ladder;
  };

  bool pass = true;

  // flat reference at level 4 (a full decade of rescaled separation)
  const auto flat = SpacetimeMetric::make(MetricSpec{});
  OpticalSolver fsolver(flat);
  KernelEvaluator fk(fsolver, KernelConfig{4, nullptr});
  const auto frep = check_dispersive(fk, make_ladder(taus12));
  double flat_ceiling = 0.0;
  out << " slopes flat j=4 [";
  for (const auto& rd : frep.regions) {
    out << " " << rd.slope;
    flat_ceiling = std::max(flat_ceiling, rd.max_ratio);
    if (rd.slope < -1.15 || rd.slope > -0.85) pass = false;
  }
  out << " ], flat ceiling " << flat_ceiling;
  if (frep.majorant_violation > 0.0) pass = false;

  // perturbed at level 4: the same decade. The level-3 slab caps the
  // rescaled separation at 8, inside the pre-asymptotic range of the window
  // (the one-dimensional factor decorrelates only past ~4), so level 3 is
  // gated through its ratio ceiling below and its slopes are reported only.
  const auto bump = SpacetimeMetric::make(bump_spec(0.05));
  OpticalSolver psolver(bump);
  KernelEvaluator pk4(psolver, KernelConfig{4, nullptr});
  const auto prep4 = check_dispersive(pk4, make_ladder(taus12));
  out << ", eps=0.05 j=4 [";
  for (const auto& rd : prep4.regions) {
    out << " " << rd.slope;
    if (rd.slope < -1.15 || rd.slope > -0.85) pass = false;
  }
  out << " ]";
  if (prep4.majorant_violation > 0.0) pass = false;

  // perturbed at level 3: ratio ceiling against the flat reference
  KernelEvaluator pk3(psolver, KernelConfig{3, nullptr});
  const auto prep3 = check_dispersive(pk3, make_ladder(taus8));
  double p3_ceiling = 0.0;
  out << ", eps=0.05 j=3 slopes [";
  for (const auto& rd : prep3.regions) {
    out << " " << rd.slope;
    p3_ceiling = std::max(p3_ceiling, rd.max_ratio);
  }
  out << " ] ceiling " << p3_ceiling << " (flat x1.5 = " << 1.5 * flat_ceiling << ")";
  if (p3_ceiling > 1.5 * flat_ceiling) pass = false;
  if (prep3.majorant_violation > 0.0) pass = false;
  return pass;
}

// ---------------------------------------------------------------- criterion 7
bool criterion_strichartz(std::ostream& out) {
  const auto metric = SpacetimeMetric::make(MetricSpec{});
  OpticalSolver solver(metric);
  const auto profile = FrequencyProfile::parse("one", "const");
  const auto pair = admissible(Rational::make(4, 1), Rational::make(4, 1));
  const std::vector<int> levels = {3, 4, 5, 6};
  ScalingOptions opt;

  // golden slopes of the saturating radial family, measured once at
  // samples_per_osc = 8, window_radius = 2, levels {3..6}
  const double golden[3] = {0.5021, 1.5051, 2.5070};
  const double caps[3] = {0.5 + 0.1, 1.5 + 0.1, 2.5 + 0.1};
  bool pass = true;
  for (int order : {0, 1, 2}) {
    const auto rep = scaling_regression(solver, profile, pair, levels, order, opt);
    out << " order " << order << ": slope " << rep.slope << " (cap " << caps[order]
        << "), C-excess " << rep.max_ratio_excess << ";";
    if (rep.slope > caps[order]) pass = false;
    if (std::abs(rep.slope - golden[order]) > 0.02) pass = false;
    if (!rep.single_constant_ok) pass = false;
  }
  return pass;
}

// ---------------------------------------------------------------- criterion 8
bool criterion_rescaling(std::ostream& out) {
  const auto metric = SpacetimeMetric::make(MetricSpec{});
  OpticalSolver solver(metric);
  KernelEvaluator kern(solver, KernelConfig{2, nullptr});
  Rng rng(108);
  std::vector<std::pair<double, Vec3>> probes;
  for (int i = 0; i < 10; ++i)
    probes.emplace_back(rng.uniform(0.25, 0.75), rng.in_box(0.5));
  const auto rep = check_rescaling(kern, probes, 0.5, Vec3{0, 0, 0}, 0.18, 8);
  out << " max relative two-path error " << rep.max_rel_error << " on "
      << rep.probes.size() << " probes";
  return rep.probes.size() == 10 && rep.max_rel_error <= 1e-4;
}

// ---------------------------------------------------------------- criterion 9
bool criterion_determinism(std::ostream& out) {
  namespace fs = std::filesystem;
  const fs::path base = fs::path("acceptance_determinism");
  fs::remove_all(base);

  ExperimentConfig cfg = default_config();
  cfg.eikonal.n_geodesics = 6;
  cfg.eikonal.regularity_points = 2;
  cfg.eikonal.residual_points = 6;
  cfg.lemma.n_random_pairs = 6;
  cfg.lemma.omega_level = 0;
  cfg.kernel.j = 3;
  cfg.kernel.taus = {2.0, 4.0, 8.0};
  cfg.kernel.ladder.taus = cfg.kernel.taus;
  cfg.strichartz.levels = {3, 4};
  cfg.strichartz.orders = {0};

  ExperimentConfig pert = cfg;
  pert.metric = bump_spec(0.05);

  struct Case {
    const char* name;
    std::function<pipelines::Result(const std::string&)> run;
  };
  const std::vector<Case> cases = {
      {"run-flat", [&](const std::string& d) { return pipelines::run_flat(cfg, d); }},
      {"run-perturbed",
       [&](const std::string& d) { return pipelines::run_perturbed(pert, d); }},
      {"verify-eikonal",
       [&](const std::string& d) { return pipelines::verify_eikonal(pert, d); }},
      {"verify-lemma",
       [&](const std::string& d) { return pipelines::verify_lemma(cfg, d); }},
      {"kernel-decay",
       [&](const std::string& d) { return pipelines::kernel_decay(cfg, d); }},
      {"strichartz-scaling",
       [&](const std::string& d) { return pipelines::strichartz_scaling(cfg, d); }},
  };

  bool pass = true;
  for (const auto& c : cases) {
    const std::string d1 = (base / (std::string(c.name) + "_1")).string();
    const std::string d2 = (base / (std::string(c.name) + "_2")).string();
    c.run(d1);
    c.run(d2);
    const std::string r1 = read_text_file(d1 + "/report.json");
    const std::string r2 = read_text_file(d2 + "/report.json");
    if (r1 != r2) {
      pass = false;
      out << " [" << c.name << " reports differ]";
    }
  }
  if (pass) out << " all six pipeline reports byte-identical across repeated runs";
  fs::remove_all(base);
  return pass;
}

}  // namespace

int main() {
  std::printf("wavegeom acceptance suite\n");
  run_criterion(1, "flat exactness to 1e-12 on a 17^3 x 9 grid", 10.0,
                criterion_flat_exactness);
  run_criterion(2, "eikonal identities at eps = 0.05 with stable constants", 300.0,
                criterion_eikonal_identities);
  run_criterion(3, "connecting-curve endpoint and transport identities", 0.0,
                criterion_connecting_curves);
  run_criterion(4, "phase lower bounds on >= 1000 samples across all cases", 0.0,
                criterion_key_lemma);
  run_criterion(5, "kernel quadrature against the reduced oracle; majorant validity", 0.0,
                criterion_kernel_oracle);
  run_criterion(6, "dispersive decay slopes and ratio ceilings", 900.0,
                criterion_dispersive);
  run_criterion(7, "mixed-norm scaling slopes with one constant", 1800.0,
                criterion_strichartz);
  run_criterion(8, "operator rescaling identity, two-path at level 2", 0.0,
                criterion_rescaling);
  run_criterion(9, "byte-identical reports under fixed seeds", 0.0,
                criterion_determinism);

  int failed = 0;
  for (const auto& c : g_results) failed += c.pass ? 0 : 1;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failed,
              g_results.size());
  return failed;
}
