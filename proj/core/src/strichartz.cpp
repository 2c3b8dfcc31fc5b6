#include "wavegeom/strichartz.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "wavegeom/parallel.hpp"

namespace wavegeom {

namespace {

constexpr double kPi = 3.14159265358979323846;

long long igcd(long long a, long long b) {
  a = std::abs(a);
  b = std::abs(b);
  while (b) {
    const long long t = a % b;
    a = b;
    b = t;
  }
  return a == 0 ? 1 : a;
}

}  // namespace

Rational Rational::make(long long n, long long d) {
  if (d == 0) throw ConfigError("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const long long g = igcd(n, d);
  Rational r;
  r.num = n / g;
  r.den = d / g;
  return r;
}

Rational Rational::parse(const std::string& text) {
  if (text == "inf" || text == "infinity") return inf();
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return make(std::stoll(text), 1);
    return make(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse rational '" + text + "'");
  }
}

double Rational::value() const {
  if (infinite) return std::numeric_limits<double>::infinity();
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string Rational::str() const {
  if (infinite) return "inf";
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

bool operator==(const Rational& a, const Rational& b) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  return a.num == b.num && a.den == b.den;
}

bool Rational::operator<(const Rational& o) const {
  if (infinite) return false;
  if (o.infinite) return true;
  return num * o.den < o.num * den;
}

Rational Rational::reciprocal() const {
  if (infinite) return make(0, 1);
  if (num == 0) return inf();
  return make(den, num);
}

Rational Rational::operator+(const Rational& o) const {
  if (infinite || o.infinite) return inf();
  return make(num * o.den + o.num * den, den * o.den);
}

Rational Rational::operator-(const Rational& o) const {
  if (infinite) return inf();
  if (o.infinite) throw ConfigError("subtracting infinity");
  return make(num * o.den - o.num * den, den * o.den);
}

Rational Rational::operator*(const Rational& o) const {
  if (infinite || o.infinite) return inf();
  return make(num * o.num, den * o.den);
}

std::optional<std::string> admissibility_rejection(const Rational& p, const Rational& q) {
  if (q.infinite) return "q = infinity is excluded";
  const Rational two = Rational::make(2, 1);
  if (p < two) return "p < 2";
  if (q < two) return "q < 2";
  const Rational half = Rational::make(1, 2);
  const Rational sum = p.reciprocal() + q.reciprocal();
  if (half < sum) return "1/p + 1/q > 1/2 (scaling line violated)";
  return std::nullopt;
}

StrichartzPair admissible(const Rational& p, const Rational& q) {
  if (const auto reason = admissibility_rejection(p, q))
    throw AdmissibilityError("inadmissible pair (" + p.str() + ", " + q.str() +
                             "): " + *reason);
  StrichartzPair pair;
  pair.p = p;
  pair.q = q;
  pair.r = Rational::make(3, 2) - p.reciprocal() - q.reciprocal() * Rational::make(3, 1);
  return pair;
}

namespace {

double point_modulus(const FieldSample& f, std::size_t point) {
  if (f.ncomp == 1) return std::abs(f.values[point]);
  if (f.ncomp == 3) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) s += std::norm(f.values[point * 3 + c]);
    return std::sqrt(s);
  }
  // symmetric (xx,xy,xz,yy,yz,zz): Frobenius norm
  static const double mult[6] = {1.0, 2.0, 2.0, 1.0, 2.0, 1.0};
  double s = 0.0;
  for (int c = 0; c < 6; ++c) s += mult[c] * std::norm(f.values[point * 6 + c]);
  return std::sqrt(s);
}

double trap_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

}  // namespace

double slice_norm(const FieldSample& field, int it, const Rational& q) {
  const GridSpec& g = field.grid;
  auto spacing = [](double lo, double hi, int n) {
    return n > 1 ? (hi - lo) / (n - 1) : 1.0;
  };
  const double hx = spacing(g.lo[0], g.hi[0], g.nx);
  const double hy = spacing(g.lo[1], g.hi[1], g.ny);
  const double hz = spacing(g.lo[2], g.hi[2], g.nz);
  if (q.infinite) {
    double m = 0.0;
    for (int ix = 0; ix < g.nx; ++ix)
      for (int iy = 0; iy < g.ny; ++iy)
        for (int iz = 0; iz < g.nz; ++iz)
          m = std::max(m, point_modulus(field, g.index(it, ix, iy, iz)));
    return m;
  }
  const double qv = q.value();
  double acc = 0.0;
  for (int ix = 0; ix < g.nx; ++ix)
    for (int iy = 0; iy < g.ny; ++iy)
      for (int iz = 0; iz < g.nz; ++iz) {
        const double w = trap_weight(ix, g.nx) * trap_weight(iy, g.ny) *
                         trap_weight(iz, g.nz) * hx * hy * hz;
        acc += std::pow(point_modulus(field, g.index(it, ix, iy, iz)), qv) * w;
      }
  return std::pow(acc, 1.0 / qv);
}

double mixed_norm(const FieldSample& field, const StrichartzPair& pair) {
  const GridSpec& g = field.grid;
  const double ht = g.nt > 1 ? (g.t1 - g.t0) / (g.nt - 1) : 1.0;
  if (pair.p.infinite) {
    double m = 0.0;
    for (int it = 0; it < g.nt; ++it) m = std::max(m, slice_norm(field, it, pair.q));
    return m;
  }
  const double pv = pair.p.value();
  double acc = 0.0;
  for (int it = 0; it < g.nt; ++it)
    acc += std::pow(slice_norm(field, it, pair.q), pv) * trap_weight(it, g.nt) * ht;
  return std::pow(acc, 1.0 / pv);
}

double flat_radial_mixed_norm(const ParametrixEvaluator& ev, const StrichartzPair& pair,
                              int derivative_order, const ScalingOptions& opt,
                              double* tail_fraction) {
  const double scale = std::ldexp(1.0, ev.level());
  const double R = opt.window_radius;
  const int nt =
      std::max<int>(opt.min_t_samples, static_cast<int>(opt.samples_per_osc * scale));
  const int nr = std::max<int>(opt.min_r_samples,
                               static_cast<int>(opt.samples_per_osc * scale * R));
  const double ht = 1.0 / (nt - 1);
  const double hr = R / (nr - 1);
  const double qv = pair.q.value();
  const double pv = pair.p.infinite ? 0.0 : pair.p.value();

  // the field modulus is radial for the supported profiles
  const double ang_factor = 4.0 * kPi;

  std::vector<double> slice(nt, 0.0);
  std::vector<double> tail(nt, 0.0);
  parallel_for(
      static_cast<std::size_t>(nt),
      [&](std::size_t it) {
        const double t = it * ht;
        double acc = 0.0, last = 0.0;
        for (int ir = 0; ir < nr; ++ir) {
          const double r = ir * hr;
          const double a = ev.flat_radial_abs(t, r, derivative_order);
          const double term =
              std::pow(a, qv) * r * r * trap_weight(ir, nr) * hr * ang_factor;
          acc += term;
          if (ir == nr - 1) last = std::pow(a, qv) * r * r * hr * ang_factor;
        }
        slice[it] = std::pow(acc, 1.0 / qv);
        tail[it] = acc > 0.0 ? last / acc : 0.0;
      },
      opt.threads);

  double worst_tail = 0.0;
  for (double f : tail) worst_tail = std::max(worst_tail, f);
  if (tail_fraction) *tail_fraction = worst_tail;

  if (pair.p.infinite) {
    double m = 0.0;
    for (double s : slice) m = std::max(m, s);
    return m;
  }
  double acc = 0.0;
  for (int it = 0; it < nt; ++it)
    acc += std::pow(slice[it], pv) * trap_weight(it, nt) * ht;
  return std::pow(acc, 1.0 / pv);
}

NormReport scaling_regression(const OpticalSolver& solver, const FrequencyProfile& profile,
                              const StrichartzPair& pair, const std::vector<int>& levels,
                              int derivative_order, const ScalingOptions& opt) {
  if (!solver.metric().flat())
    throw ConfigError("scaling_regression uses the separable flat radial path");
  if (profile.angular != "const")
    throw ConfigError("scaling_regression requires a constant angular profile");
  if (levels.size() < 2) throw ConfigError("scaling_regression needs at least two levels");

  NormReport rep;
  rep.pair = pair;
  rep.derivative_order = derivative_order;
  rep.target_r = pair.r.value() + derivative_order;

  for (int j : levels) {
    const DyadicWindow window{j};
    ParametrixEvaluator ev(solver, window, profile);
    LevelNorm ln;
    ln.j = j;
    double tail = 0.0;
    ln.norm = flat_radial_mixed_norm(ev, pair, derivative_order, opt, &tail);
    ln.data_norm = profile.data_norm(window);
    ln.ratio = ln.norm / (std::pow(2.0, rep.target_r * j) * ln.data_norm);
    rep.tail_fraction = std::max(rep.tail_fraction, tail);
    rep.per_j.push_back(ln);
  }

  // least squares of log2(norm / data_norm) against j
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(rep.per_j.size());
  for (const auto& ln : rep.per_j) {
    const double y = std::log2(ln.norm / ln.data_norm);
    sx += ln.j;
    sy += y;
    sxx += static_cast<double>(ln.j) * ln.j;
    sxy += ln.j * y;
  }
  rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - rep.slope * sx) / n;
  double ss = 0.0;
  for (const auto& ln : rep.per_j) {
    const double y = std::log2(ln.norm / ln.data_norm);
    const double e = y - (rep.slope * ln.j + intercept);
    ss += e * e;
  }
  rep.residual = std::sqrt(ss / n);

  // one constant, fitted on the first level and reused for the others
  rep.fitted_C = rep.per_j.front().ratio;
  rep.max_ratio_excess = 0.0;
  for (const auto& ln : rep.per_j)
    rep.max_ratio_excess = std::max(rep.max_ratio_excess, ln.ratio / rep.fitted_C - 1.0);
  rep.single_constant_ok = rep.max_ratio_excess <= opt.single_constant_tol;
  return rep;
}

}  // namespace wavegeom
