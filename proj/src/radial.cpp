#include "ulrm/radial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include "ulrm/error.hpp"

namespace ulrm {

namespace {

constexpr double kCoreCutoff = 0.05;

bool is_hydrogenic(const SpeciesData& sp) {
  return std::all_of(sp.defect_coeffs.begin(), sp.defect_coeffs.end(),
                     [](const RydbergRitz& c) { return c.delta0 == 0.0 && c.delta2 == 0.0; });
}

// Composite Simpson on a uniform grid; a trailing odd interval uses the trapezoid rule.
double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  std::size_t last = (n % 2 == 1) ? n - 1 : n - 2;
  double s = 0.0;
  for (std::size_t i = 0; i + 2 <= last; i += 2) s += f[i] + 4.0 * f[i + 1] + f[i + 2];
  s *= h / 3.0;
  if (last != n - 1) s += 0.5 * h * (f[n - 2] + f[n - 1]);
  return s;
}

double trapezoid(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) s += f[i - 1] + f[i];
  return 0.5 * h * s;
}

}  // namespace

struct RadialWavefunction::Spline {
  gsl_spline* s = nullptr;
  Spline(const std::vector<double>& x, const std::vector<double>& y) {
    s = gsl_spline_alloc(gsl_interp_cspline, x.size());
    gsl_spline_init(s, x.data(), y.data(), x.size());
  }
  ~Spline() { gsl_spline_free(s); }
  Spline(const Spline&) = delete;
  Spline& operator=(const Spline&) = delete;
};

double rydberg_energy(const SpeciesData& species, int n, int l) {
  if (n < 5) {
    throw InvalidStateError("invalid Rydberg state n=" + std::to_string(n) + " (need n >= 5)");
  }
  const double ns = n - quantum_defect(species, n, l);
  return -0.5 / (ns * ns);
}

RydbergState make_state(const SpeciesData& species, int n, int l) {
  return {species.name, n, l, rydberg_energy(species, n, l)};
}

GridSpec GridSpec::for_n(int n_max, int points, double rmax_factor) {
  if (points < 16) throw UsageError("radial grid needs at least 16 points");
  GridSpec g;
  g.r_max = rmax_factor * n_max * n_max;
  g.log_step = std::log(g.r_max / kCoreCutoff) / (points - 1);
  return g;
}

RadialWavefunction::RadialWavefunction(RydbergState state, std::vector<double> r,
                                       std::vector<double> u, double log_step, double norm_error)
    : state_(std::move(state)),
      r_(std::move(r)),
      u_(std::move(u)),
      log_step_(log_step),
      norm_error_(norm_error),
      spline_(std::make_shared<const Spline>(r_, u_)) {}

double RadialWavefunction::evaluate_u(double r) const {
  if (!(r >= r_.front() && r <= r_.back())) {
    std::ostringstream os;
    os << "r = " << r << " outside radial grid [" << r_.front() << ", " << r_.back() << "]";
    throw RangeError(os.str());
  }
  auto it = std::lower_bound(r_.begin(), r_.end(), r);
  if (it != r_.end() && *it == r) return u_[static_cast<std::size_t>(it - r_.begin())];
  return gsl_spline_eval(spline_->s, r, nullptr);
}

double RadialWavefunction::evaluate_du(double r) const {
  if (!(r >= r_.front() && r <= r_.back())) {
    std::ostringstream os;
    os << "r = " << r << " outside radial grid [" << r_.front() << ", " << r_.back() << "]";
    throw RangeError(os.str());
  }
  return gsl_spline_eval_deriv(spline_->s, r, nullptr);
}

double RadialWavefunction::sample_u(double r) const {
  return r < r_.front() ? 0.0 : evaluate_u(r);
}

double RadialWavefunction::sample_du(double r) const {
  return r < r_.front() ? 0.0 : evaluate_du(r);
}

double radial_cutoff(const RydbergState& state) {
  const double E = state.energy;
  const double L = state.l * (state.l + 1.0);
  double r_in = 0.0;
  if (L > 0.0) {
    const double disc = 1.0 + 2.0 * E * L;
    if (disc > 0.0) r_in = (-1.0 + std::sqrt(disc)) / (2.0 * E);
  }
  return std::max(kCoreCutoff, 0.5 * r_in);
}

int count_nodes(const std::vector<double>& u, double rel_floor) {
  double mx = 0.0;
  for (double v : u) mx = std::max(mx, std::abs(v));
  const double floor = rel_floor * mx;
  int nodes = 0;
  int last_sign = 0;
  for (double v : u) {
    if (std::abs(v) <= floor) continue;
    int s = v > 0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++nodes;
    last_sign = s;
  }
  return nodes;
}

RadialWavefunction solve_radial(const RydbergState& state, const GridSpec& grid) {
  const double E = state.energy;
  const int l = state.l;
  const double L = l * (l + 1.0);
  if (!(E < 0.0)) throw IntegrationError("bound-state integration needs E < 0");
  if (grid.log_step <= 0.0 || grid.r_max <= 0.0) throw UsageError("invalid radial grid spec");

  const double disc = 1.0 + 2.0 * E * L;
  if (disc <= 0.0) {
    throw IntegrationError("no classically allowed region for n=" + std::to_string(state.n) +
                           " l=" + std::to_string(l));
  }
  const double r_out = (1.0 + std::sqrt(disc)) / (-2.0 * E);
  if (grid.r_max <= r_out) {
    std::ostringstream os;
    os << "r_max = " << grid.r_max << " inside the outer turning point " << r_out
       << "; tail cannot decay";
    throw IntegrationError(os.str());
  }

  const double h = grid.log_step;
  const double r_min = radial_cutoff(state);
  const double x_max = std::log(grid.r_max);
  const auto N = static_cast<std::size_t>(std::floor((x_max - std::log(r_min)) / h)) + 1;
  if (N < 16) throw UsageError("radial grid step too coarse");

  // Integration starts past r_max, deep enough in the forbidden region that the
  // seed error has died out before the returned grid begins.
  std::size_t extra = 0;
  for (double depth = 0.0; depth < 30.0 && extra < 20000; ++extra) {
    const double ra = grid.r_max * std::exp(h * static_cast<double>(extra));
    const double rb = ra * std::exp(h);
    const double kap = std::sqrt(std::max(-2.0 * E - 2.0 / rb + L / (rb * rb), 0.0));
    depth += kap * (rb - ra);
  }
  const std::size_t M = N + extra;

  std::vector<double> r(M), f(M), w(M, 0.0);
  for (std::size_t i = 0; i < M; ++i) {
    const double x = x_max - h * (static_cast<double>(N - 1) - static_cast<double>(i));
    r[i] = i + 1 == N ? grid.r_max : std::exp(x);
    const double g = (l + 0.5) * (l + 0.5) - 2.0 * r[i] - 2.0 * E * r[i] * r[i];
    f[i] = 1.0 - h * h * g / 12.0;
  }

  // WKB tail seed: w ~ r^{-1/2} exp(-κ r)
  const double rN = r[M - 1], rN1 = r[M - 2];
  const double kap = std::sqrt(std::max(-2.0 * E - 2.0 / rN1 + L / (rN1 * rN1), 1e-30));
  w[M - 1] = 1e-30;
  w[M - 2] = w[M - 1] * std::exp(kap * (rN - rN1)) * std::sqrt(rN / rN1);
  for (std::size_t i = M - 2; i >= 1; --i) {
    w[i - 1] = ((12.0 - 10.0 * f[i]) * w[i] - f[i + 1] * w[i + 1]) / f[i - 1];
    if (std::abs(w[i - 1]) > 1e250) {
      for (std::size_t j = i - 1; j < M; ++j) w[j] *= 1e-250;
    }
    if (!std::isfinite(w[i - 1])) throw IntegrationError("Numerov integration overflowed");
  }
  std::vector<double> u(M), integrand(M);
  for (std::size_t i = 0; i < M; ++i) {
    u[i] = w[i] * std::sqrt(r[i]);
    integrand[i] = u[i] * u[i] * r[i];
  }
  const double norm = trapezoid(integrand, h);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw IntegrationError("wavefunction not normalizable");
  const double scale = 1.0 / std::sqrt(norm);
  for (std::size_t i = 0; i < M; ++i) {
    u[i] *= scale;
    integrand[i] *= scale * scale;
  }
  const double norm_error = std::abs(simpson(integrand, h) - 1.0);
  r.resize(N);
  u.resize(N);

  const SpeciesData& sp = species_lookup(state.species);
  if (is_hydrogenic(sp)) {
    const int nodes = count_nodes(u);
    if (nodes != state.n - l - 1) {
      throw AccuracyError("radial grid too coarse: " + std::to_string(nodes) + " nodes, expected " +
                          std::to_string(state.n - l - 1));
    }
  }
  return RadialWavefunction(state, std::move(r), std::move(u), h, norm_error);
}

double radial_integral(const RadialWavefunction& a, const RadialWavefunction& b, int power) {
  const auto& ra = a.r_grid();
  const auto& rb = b.r_grid();
  if (a.log_step() != b.log_step() || ra.back() != rb.back()) {
    throw UsageError("radial_integral needs wavefunctions on a shared GridSpec");
  }
  const std::size_t m = std::min(ra.size(), rb.size());
  const std::size_t oa = ra.size() - m, ob = rb.size() - m;
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ra[oa + i];
    f[i] = a.u()[oa + i] * b.u()[ob + i] * std::pow(r, power + 1);
  }
  return trapezoid(f, a.log_step());
}

}  // namespace ulrm
