#include "ulrm/vibrational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <gsl/gsl_spline.h>
#include <lapacke.h>

#include "parallel.hpp"
#include "ulrm/error.hpp"
#include "ulrm/units.hpp"

namespace ulrm {

namespace {

struct SplineDeleter {
  void operator()(gsl_spline* s) const { gsl_spline_free(s); }
};

}  // namespace

double reduced_mass(double m1, double m2) {
  if (!(m1 > 0.0 && m2 > 0.0)) throw UsageError("masses must be positive");
  return m1 * m2 / (m1 + m2);
}

std::vector<VibrationalLevel> solve_vibrational(const std::vector<double>& R, const std::vector<double>& V,
                                                const WellDescriptor& well, double mu, int n_levels,
                                                const VibrationalOptions& options) {
  if (!(mu > 0.0)) throw UsageError("reduced mass must be positive");
  if (R.size() != V.size() || R.size() < 4) throw UsageError("curve needs matching R and V with >= 4 samples");
  if (options.points < 20) throw ResolutionError("vibrational grid needs at least 20 points");
  if (!(well.R_left < well.R_min && well.R_min < well.R_right)) {
    throw UsageError("well boundaries must satisfy R_left < R_min < R_right");
  }
  const auto inside = std::count_if(R.begin(), R.end(),
                                    [&](double r) { return r >= well.R_left && r <= well.R_right; });
  if (inside < 5) throw ResolutionError("well spans fewer than 5 curve samples");
  if (n_levels <= 0) return {};

  const double width = well.R_right - well.R_left;
  const double lo = std::max(R.front(), well.R_left - options.margin * width);
  const double hi = std::min(R.back(), well.R_right + options.margin * width);
  const int N = options.points;
  const double dx = (hi - lo) / (N + 1);

  std::unique_ptr<gsl_spline, SplineDeleter> spline(gsl_spline_alloc(gsl_interp_cspline, R.size()));
  gsl_spline_init(spline.get(), R.data(), V.data(), R.size());

  std::vector<double> x(static_cast<std::size_t>(N)), d(static_cast<std::size_t>(N)),
      e(static_cast<std::size_t>(N - 1));
  const double t = 1.0 / (mu * dx * dx);
  for (int i = 0; i < N; ++i) {
    x[static_cast<std::size_t>(i)] = lo + dx * (i + 1);
    d[static_cast<std::size_t>(i)] = t + gsl_spline_eval(spline.get(), x[static_cast<std::size_t>(i)], nullptr);
  }
  std::fill(e.begin(), e.end(), -0.5 * t);

  const int want = std::min(n_levels, N);
  std::vector<double> w(static_cast<std::size_t>(N)), z(static_cast<std::size_t>(N) * static_cast<std::size_t>(want));
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(want));
  lapack_int m = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', N, d.data(), e.data(), 0.0, 0.0, 1, want,
                                         0.0, &m, w.data(), z.data(), N, isuppz.data());
  if (info != 0) throw EigenSolverError("dstevr failed (info " + std::to_string(info) + ")", 0);

  std::vector<VibrationalLevel> out;
  for (lapack_int k = 0; k < m; ++k) {
    if (!(w[static_cast<std::size_t>(k)] < well.barrier)) break;
    VibrationalLevel lv;
    lv.v = static_cast<int>(k);
    lv.energy = w[static_cast<std::size_t>(k)];
    lv.energy_shift = units::hartree_to_mhz(lv.energy);
    lv.R = x;
    lv.chi.assign(z.begin() + static_cast<std::ptrdiff_t>(k) * N, z.begin() + static_cast<std::ptrdiff_t>(k + 1) * N);
    double nrm = 0.0, mx = 0.0;
    for (double c : lv.chi) {
      nrm += c * c;
      mx = std::max(mx, std::abs(c));
    }
    double sign = 1.0;
    for (std::size_t i = 0; i + 1 < lv.chi.size(); ++i) {
      const double a = std::abs(lv.chi[i]);
      if (a > 1e-3 * mx && (i == 0 || a >= std::abs(lv.chi[i - 1])) && a >= std::abs(lv.chi[i + 1])) {
        sign = lv.chi[i] < 0.0 ? -1.0 : 1.0;
        break;
      }
    }
    const double s = sign / std::sqrt(nrm * dx);
    for (double& c : lv.chi) c *= s;
    lv.well = well;
    out.push_back(std::move(lv));
  }
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("fit_slope needs >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

OuterWellResult outer_well_levels(const SpeciesData& rydberg, int n, int l, const SpeciesData& perturber,
                                  double R_lo_factor, double R_hi_factor, std::size_t R_points,
                                  bool include_p_wave, int n_levels, const VibrationalOptions& vib) {
  const auto basis = prepare_basis(extended_basis(rydberg, n, l));
  const double ns = n - quantum_defect(rydberg, n, l);
  const auto R = linspace(R_lo_factor * ns * ns, R_hi_factor * ns * ns, R_points);
  PecOptions opt;
  opt.include_p_wave = include_p_wave;
  opt.tracking = TrackingMode::TargetOnly;
  OuterWellResult res{pec_diagonalize(basis, perturber, R, opt), {}, {}};
  const auto& V = res.curves.curves[res.curves.target_curve];
  const auto wells = find_wells(R, V);
  if (wells.empty()) throw ResolutionError("no well found on the tracked curve");
  res.well = wells.front();
  res.levels = solve_vibrational(R, V, res.well, reduced_mass(rydberg.mass, perturber.mass), n_levels, vib);
  return res;
}

std::vector<std::pair<std::string, std::string>> all_species_pairs() {
  return {{"Rb", "Rb"}, {"Rb", "Cs"}, {"Cs", "Rb"}, {"Cs", "Cs"}};
}

std::vector<ScalingSeries> scaling_study(const std::vector<std::pair<std::string, std::string>>& pairs,
                                         int n_lo, int n_hi, const ScalingOptions& options) {
  if (n_lo < 30 || n_hi > 60 || n_lo > n_hi) {
    throw RangeError("scaling_study n range must lie within [30, 60]");
  }
  const std::size_t nn = static_cast<std::size_t>(n_hi - n_lo + 1);
  std::vector<ScalingSeries> out(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    out[p].rydberg = pairs[p].first;
    out[p].perturber = pairs[p].second;
    out[p].rows.resize(nn);
  }
  detail::parallel_for(pairs.size() * nn, [&](std::size_t job) {
    const std::size_t p = job / nn;
    const int n = n_lo + static_cast<int>(job % nn);
    const auto& ry = species_lookup(pairs[p].first);
    const auto& pe = species_lookup(pairs[p].second);
    auto res = outer_well_levels(ry, n, options.l, pe, options.R_lo_factor, options.R_hi_factor,
                                 options.R_points, options.include_p_wave, 2, options.vib);
    if (res.levels.empty()) throw ResolutionError("no bound level for n=" + std::to_string(n));
    ScalingRow row;
    row.n = n;
    row.R_min = res.well.R_min;
    row.E_v0 = res.levels[0].energy_shift;
    row.E_v1 = res.levels.size() > 1 ? res.levels[1].energy_shift : std::numeric_limits<double>::quiet_NaN();
    out[p].rows[job % nn] = row;
  });
  for (auto& s : out) {
    std::vector<double> x, y;
    for (const auto& r : s.rows) {
      x.push_back(std::log(static_cast<double>(r.n)));
      y.push_back(std::log(std::abs(r.E_v0)));
    }
    s.slope = x.size() >= 2 ? fit_slope(x, y) : 0.0;
  }
  return out;
}

}  // namespace ulrm
