#include "wavegeom/kernel.hpp"

#include <cmath>
#include <sstream>

#include "wavegeom/parallel.hpp"
#include "wavegeom/quadrature.hpp"

namespace wavegeom {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::complex<double> kI{0.0, 1.0};

double fit_loglog_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& [x, y] : pts) {
    if (x <= 0.0 || y <= 0.0) continue;
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

KernelEvaluator::KernelEvaluator(const OpticalSolver& solver, KernelConfig config,
                                 KernelOptions opt)
    : solver_(&solver), config_(std::move(config)), opt_(opt) {
  if (config_.j < 0) throw ConfigError("kernel level j must be nonnegative");
  if (config_.amplitude) {
    // |a| <= 1 on a light validation sample
    const double R = solver_->metric().spec().box_radius * 0.8;
    for (double t : {0.0, 0.5, 1.0})
      for (const auto& w : icosphere_directions(0))
        for (const Vec3& x :
             {Vec3{0, 0, 0}, Vec3{R, -R, R} * 0.5, Vec3{-R, R, -R} * 0.7}) {
          if (std::abs(config_.amplitude(t, x, w)) > 1.0 + 1e-12)
            throw ConfigError("kernel amplitude exceeds 1 at a validation sample");
        }
  }
}

void KernelEvaluator::require_in_slab(const RescaledPair& pair) const {
  const double s = std::ldexp(1.0, config_.j);
  solver_->metric().require_inside(pair.t / s, pair.x / s);
  solver_->metric().require_inside(pair.s / s, pair.y / s);
}

bool KernelEvaluator::has_fast_path() const {
  return opt_.flat_fast_path && solver_->metric().flat() && !config_.amplitude;
}

std::complex<double> KernelEvaluator::k1(double D, int nodes) const {
  const int per_panel = 10;
  const int panels = (std::max(nodes, opt_.lambda_min_nodes) + per_panel - 1) / per_panel;
  const auto rule = composite_gauss_legendre(0.5, 2.0, panels, per_panel);
  std::complex<double> acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double lam = rule.nodes[i];
    const double p = DyadicWindow::psi(lam);
    acc += std::exp(kI * (lam * D)) * (p * p * lam * lam) * rule.weights[i];
  }
  return acc;
}

std::complex<double> KernelEvaluator::value_flat_reduced(const RescaledPair& pair) const {
  const double tau = pair.s - pair.t;
  const double R = norm(pair.x - pair.y);
  const int nodes = oscillatory_node_count(1.5 * (std::abs(tau) + R), opt_.lambda_min_nodes,
                                           opt_.pts_per_wavelength);
  const int per_panel = 10;
  const int panels = (nodes + per_panel - 1) / per_panel;
  const auto rule = composite_gauss_legendre(0.5, 2.0, panels, per_panel);
  std::complex<double> acc{};
  if (R < 1e-12) {
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double lam = rule.nodes[i];
      const double p = DyadicWindow::psi(lam);
      acc += std::exp(kI * (lam * tau)) * (p * p * lam * lam) * rule.weights[i];
    }
    return 4.0 * kPi * acc;
  }
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double lam = rule.nodes[i];
    const double p = DyadicWindow::psi(lam);
    acc += std::exp(kI * (lam * tau)) * (p * p * lam * std::sin(lam * R)) * rule.weights[i];
  }
  return (4.0 * kPi / R) * acc;
}

double KernelEvaluator::phase_span(const RescaledPair& pair) const {
  const double s = std::ldexp(1.0, config_.j);
  double lo = 1e300, hi = -1e300;
  for (const auto& w : icosphere_directions(1)) {
    const double phi =
        solver_->u(pair.t / s, pair.x / s, w) - solver_->u(pair.s / s, pair.y / s, w);
    lo = std::min(lo, phi);
    hi = std::max(hi, phi);
  }
  return s * (hi - lo);
}

KernelSample KernelEvaluator::eval(const RescaledPair& pair) const {
  require_in_slab(pair);
  KernelSample out;
  out.pair = pair;

  const double scale = std::ldexp(1.0, config_.j);
  const double span = phase_span(pair);
  const int lam_nodes =
      oscillatory_node_count(2.0 * span, opt_.lambda_min_nodes, opt_.pts_per_wavelength);
  const Vec3 sep = pair.y - pair.x;
  const Vec3 axis = norm(sep) > 1e-9 ? normalized(sep) : Vec3{0, 0, 1};

  double majorant_acc = 0.0;
  auto eval_on = [&](const SphereRule& rule) {
    std::vector<std::complex<double>> parts(rule.nodes.size());
    std::vector<double> mparts(rule.nodes.size());
    parallel_for(rule.nodes.size(), [&](std::size_t i) {
      const Vec3& w = rule.nodes[i].dir;
      const double tt = pair.t / scale, ss = pair.s / scale;
      const Vec3 xx = pair.x / scale, yy = pair.y / scale;
      const double phi = solver_->u(tt, xx, w) - solver_->u(ss, yy, w);
      const double D = scale * phi;
      double amp = 1.0;
      if (config_.amplitude)
        amp = config_.amplitude(tt, xx, w) * config_.amplitude(ss, yy, w);
      parts[i] = k1(D, lam_nodes) * (amp * rule.nodes[i].weight);
      mparts[i] = rule.nodes[i].weight / (1.0 + D * D);
    });
    std::complex<double> acc{};
    double macc = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      acc += parts[i];
      macc += mparts[i];
    }
    majorant_acc = macc;
    return acc;
  };

  const double k_scale = 4.0 * kPi * window_I0();  // |K| at zero separation
  if (has_fast_path()) {
    out.value = value_flat_reduced(pair);
    // the majorant still integrates the phase envelope over the sphere
    const int nt = std::max(opt_.min_theta, oscillatory_node_count(span, 8, 1.5));
    const SphereRule rule = sphere_rule(axis, nt, opt_.min_phi);
    eval_on(rule);
    out.n_theta = nt;
    out.n_phi = opt_.min_phi;
  } else {
    const int nt0 = std::max(opt_.min_theta, oscillatory_node_count(2.0 * span, 8, 1.2));
    const int np0 =
        std::max(opt_.min_phi, solver_->metric().flat() ? opt_.min_phi : (2 * nt0) / 3);
    out.value = refine_to_tolerance(eval_on, axis, nt0, np0, opt_.rel_tol,
                                    opt_.max_doublings, k_scale);
  }
  out.ibp_majorant = window_c_psi() * majorant_acc;
  out.dispersive_ratio = std::abs(out.value) * std::abs(pair.t - pair.s);
  return out;
}

std::complex<double> KernelEvaluator::value_generic(const RescaledPair& pair) const {
  require_in_slab(pair);
  const double scale = std::ldexp(1.0, config_.j);
  const double span = phase_span(pair);
  const int lam_nodes =
      oscillatory_node_count(2.0 * span, opt_.lambda_min_nodes, opt_.pts_per_wavelength);
  const Vec3 sep = pair.y - pair.x;
  const Vec3 axis = norm(sep) > 1e-9 ? normalized(sep) : Vec3{0, 0, 1};
  auto eval_on = [&](const SphereRule& rule) {
    std::vector<std::complex<double>> parts(rule.nodes.size());
    parallel_for(rule.nodes.size(), [&](std::size_t i) {
      const Vec3& w = rule.nodes[i].dir;
      const double tt = pair.t / scale, ss = pair.s / scale;
      const Vec3 xx = pair.x / scale, yy = pair.y / scale;
      const double phi = solver_->u(tt, xx, w) - solver_->u(ss, yy, w);
      double amp = 1.0;
      if (config_.amplitude)
        amp = config_.amplitude(tt, xx, w) * config_.amplitude(ss, yy, w);
      parts[i] = k1(scale * phi, lam_nodes) * (amp * rule.nodes[i].weight);
    });
    std::complex<double> acc{};
    for (const auto& p : parts) acc += p;
    return acc;
  };
  const int nt0 = std::max(opt_.min_theta, oscillatory_node_count(2.0 * span, 8, 1.2));
  const int np0 =
      std::max(opt_.min_phi, solver_->metric().flat() ? opt_.min_phi : (2 * nt0) / 3);
  return refine_to_tolerance(eval_on, axis, nt0, np0, opt_.rel_tol, opt_.max_doublings,
                             4.0 * kPi * window_I0());
}

double KernelEvaluator::majorant(const RescaledPair& pair) const {
  return eval(pair).ibp_majorant;
}

DispersiveReport check_dispersive(const KernelEvaluator& kernel,
                                  const DecayLadderConfig& ladder) {
  DispersiveReport rep;
  rep.j = kernel.level();
  rep.epsilon = kernel.solver().metric().epsilon();
  const double scale = std::ldexp(1.0, kernel.level());

  const Region kinds[3] = {Region::OnS, Region::Interior, Region::Exterior};
  for (Region region : kinds) {
    RegionDecay rd;
    rd.region = region;
    for (double tau : ladder.taus) {
      DecayPoint pt;
      pt.tau = tau;
      std::vector<std::pair<double, bool>> fracs;  // (fraction, enters slope fit)
      if (region == Region::OnS) {
        fracs = {{1.0, true}};
      } else if (region == Region::Interior) {
        for (double f : ladder.interior_fracs) fracs.emplace_back(f, true);
        for (double f : ladder.interior_extra_fracs) fracs.emplace_back(f, false);
      } else {
        for (double f : ladder.exterior_fracs) fracs.emplace_back(f, true);
        for (double f : ladder.exterior_extra_fracs) fracs.emplace_back(f, false);
      }

      for (const auto& [f, in_fit] : fracs) {
        RescaledPair pair;
        pair.t = ladder.base_t * scale;
        pair.x = ladder.base_x * scale;
        pair.s = pair.t + tau;

        if (region == Region::OnS && !kernel.solver().metric().flat()) {
          // land exactly on the geodesic sphere by shooting
          const auto geo = kernel.solver().shoot(ladder.base_t, ladder.base_x,
                                                 ladder.direction, tau / scale, 2);
          pair.y = geo.samples.back().x * scale;
        } else {
          pair.y = pair.x + ladder.direction * (f * tau);
        }

        if (ladder.classify) {
          PhasePair upair{pair.t / scale, pair.x / scale, pair.s / scale, pair.y / scale};
          const auto dec = decompose(kernel.solver(), upair);
          if (dec.region != region) continue;  // keep the ladder honest
        }
        const auto ks = kernel.eval(pair);
        rep.majorant_violation = std::max(
            rep.majorant_violation,
            std::abs(ks.value) - ks.ibp_majorant - 1e-4 * 4.0 * kPi * window_I0());
        rep.rows.push_back(
            {region, tau, f, pair, std::abs(ks.value), ks.ibp_majorant,
             ks.dispersive_ratio});
        if (in_fit) pt.max_abs_k = std::max(pt.max_abs_k, std::abs(ks.value));
        pt.max_ratio = std::max(pt.max_ratio, ks.dispersive_ratio);
        ++pt.n_pairs;
      }
      if (pt.n_pairs > 0) rd.points.push_back(pt);
    }
    std::vector<std::pair<double, double>> fitpts;
    for (const auto& p : rd.points) {
      fitpts.emplace_back(p.tau, p.max_abs_k);
      rd.max_ratio = std::max(rd.max_ratio, p.max_ratio);
    }
    rd.slope = fit_loglog_slope(fitpts);
    rep.regions.push_back(std::move(rd));
  }
  return rep;
}

RescalingReport check_rescaling(const KernelEvaluator& kernel,
                                const std::vector<std::pair<double, Vec3>>& probes,
                                double h_t0, const Vec3& h_x0, double h_w,
                                int outer_nodes_per_axis) {
  RescalingReport rep;
  rep.j = kernel.level();
  const double scale = std::ldexp(1.0, kernel.level());
  const OpticalSolver& solver = kernel.solver();
  if (!solver.metric().flat())
    throw ConfigError(
        "the rescaling check needs the nested unrescaled quadrature and is implemented "
        "for the flat family");

  auto hfun = [&](double s, const Vec3& y) {
    const Vec3 d = y - h_x0;
    return std::exp(-(dot(d, d) + (s - h_t0) * (s - h_t0)) / (h_w * h_w));
  };

  // outer rule over the truncated support of h (unrescaled variables)
  const double tw = 3.0 * h_w;
  const int n = outer_nodes_per_axis;
  const double t_lo = std::max(0.0, h_t0 - tw), t_hi = std::min(1.0, h_t0 + tw);
  if (t_lo >= t_hi) {
    // h vanishes on the slab after truncation; both paths are zero
    for (const auto& [pt, px] : probes)
      rep.probes.push_back({pt, px, {0.0, 0.0}, {0.0, 0.0}, 0.0});
    return rep;
  }
  const auto trule = gauss_legendre_on(t_lo, t_hi, n);
  std::array<QuadRule1D, 3> xr;
  for (int c = 0; c < 3; ++c) xr[c] = gauss_legendre_on(h_x0[c] - tw, h_x0[c] + tw, n);

  struct OuterNode {
    double s;
    Vec3 y;
    double wh;  // quadrature weight * h value
  };
  std::vector<OuterNode> outer;
  outer.reserve(static_cast<std::size_t>(n) * n * n * n);
  for (int it = 0; it < n; ++it)
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy)
        for (int iz = 0; iz < n; ++iz) {
          OuterNode node;
          node.s = trule.nodes[it];
          node.y = Vec3{xr[0].nodes[ix], xr[1].nodes[iy], xr[2].nodes[iz]};
          node.wh = trule.weights[it] * xr[0].weights[ix] * xr[1].weights[iy] *
                    xr[2].weights[iz] * hfun(node.s, node.y);
          if (std::abs(node.wh) > 1e-16) outer.push_back(node);
        }

  // spread of h around each probe bounds the sphere-rule size
  for (const auto& [pt, px] : probes) {
    RescalingProbe probe;
    probe.t = pt;
    probe.x = px;

    // --- left side: U_j h = T_j (T_j^* h) as a nested quadrature with
    // unrescaled lambda in [2^{j-1}, 2^{j+1}]
    double reach = 0.0;
    for (const auto& node : outer)
      reach = std::max(reach, std::abs(pt - node.s) + norm(px - node.y));
    const int lam_nodes = oscillatory_node_count(1.5 * scale * reach, 80, 6.0);
    const int lam_panels = (lam_nodes + 9) / 10;
    const auto lrule =
        composite_gauss_legendre(0.5 * scale, 2.0 * scale, lam_panels, 10);
    // polar axis towards the bulk of h; azimuth nodes sized by the
    // transverse spread of the outer nodes about that axis
    const Vec3 sep = h_x0 - px;
    const Vec3 axis = norm(sep) > 1e-9 ? normalized(sep) : Vec3{0, 0, 1};
    double perp = 0.0;
    for (const auto& node : outer) {
      const Vec3 d = node.y - px;
      perp = std::max(perp, norm(d - axis * dot(d, axis)));
    }
    const int nt = std::max(12, oscillatory_node_count(2.0 * scale * reach, 8, 1.2));
    const int np = std::max(16, oscillatory_node_count(2.0 * scale * perp, 8, 1.2));
    const SphereRule srule = sphere_rule(axis, nt, np);

    std::vector<std::complex<double>> omega_parts(srule.nodes.size());
    parallel_for(srule.nodes.size(), [&](std::size_t iw) {
      const Vec3& w = srule.nodes[iw].dir;
      // u at the probe and at the outer nodes for this direction
      const double up = solver.u(pt, px, w);
      std::vector<double> uq(outer.size());
      for (std::size_t q = 0; q < outer.size(); ++q)
        uq[q] = solver.u(outer[q].s, outer[q].y, w);
      std::complex<double> acc{};
      for (std::size_t il = 0; il < lrule.nodes.size(); ++il) {
        const double lam = lrule.nodes[il];
        const double p = DyadicWindow::psi(lam / scale);
        if (p == 0.0) continue;
        // inner T_j^* h factor at (lam, w)
        std::complex<double> inner{};
        for (std::size_t q = 0; q < outer.size(); ++q)
          inner += std::exp(kI * (-lam * uq[q])) * outer[q].wh;
        acc += std::exp(kI * (lam * up)) * (p * p * lam * lam) * lrule.weights[il] * inner;
      }
      omega_parts[iw] = acc * srule.nodes[iw].weight;
    });
    std::complex<double> lhs{};
    for (const auto& part : omega_parts) lhs += part;

    // --- right side: 2^{-j} (A h_j)(2^j t, 2^j x); after q = 2^j q~ the
    // outer substitution contributes 2^{4j}, so rhs = 2^{3j} int K(...) h
    std::complex<double> rhs{};
    for (const auto& node : outer) {
      RescaledPair rp;
      rp.t = pt * scale;
      rp.x = px * scale;
      rp.s = node.s * scale;
      rp.y = node.y * scale;
      rhs += kernel.value_flat_reduced(rp) * node.wh;
    }
    rhs *= std::pow(scale, 3.0);

    probe.lhs = lhs;
    probe.rhs = rhs;
    const double ref = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    probe.rel_error = std::abs(lhs - rhs) / ref;
    rep.max_rel_error = std::max(rep.max_rel_error, probe.rel_error);
    rep.probes.push_back(probe);
  }
  return rep;
}

}  // namespace wavegeom
