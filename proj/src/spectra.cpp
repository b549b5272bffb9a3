#include "ulrm/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "ulrm/error.hpp"
#include "ulrm/units.hpp"

namespace ulrm {

namespace {

double poisson(double lambda, int k) {
  return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

}  // namespace

double polyatomic_shift(const DimerEnergyQuartet& q, const std::string& rydberg, int i, int j) {
  if (i < 0 || j < 0) throw UsageError("atom counts must be non-negative");
  if (rydberg == "Rb") return i * q.a + j * q.b;
  if (rydberg == "Cs") return i * q.c + j * q.d;
  throw UnknownSpeciesError(rydberg);
}

std::vector<SpectrumLine> enumerate_lines(const DimerEnergyQuartet& q, const std::string& rydberg,
                                          int max_atoms, const LineOptions& options) {
  if (max_atoms > 10) throw UsageError("max_atoms must be <= 10");
  if (max_atoms < 1) return {};
  std::vector<SpectrumLine> lines;
  for (int i = 0; i <= max_atoms; ++i) {
    for (int j = 0; j <= max_atoms; ++j) {
      if (i + j < 1) continue;
      if (options.cap == AtomCap::Total && i + j > max_atoms) continue;
      SpectrumLine s;
      s.rydberg_species = rydberg;
      s.i = i;
      s.j = j;
      s.shift = polyatomic_shift(q, rydberg, i, j);
      s.weight = 1.0;
      if (options.lambda_rb) s.weight *= poisson(*options.lambda_rb, i);
      if (options.lambda_cs) s.weight *= poisson(*options.lambda_cs, j);
      lines.push_back(s);
    }
  }
  std::stable_sort(lines.begin(), lines.end(),
                   [](const SpectrumLine& x, const SpectrumLine& y) { return x.shift < y.shift; });
  std::vector<SpectrumLine> merged;
  for (const auto& s : lines) {
    if (!merged.empty() && std::abs(s.shift - merged.back().shift) < options.merge_tolerance) {
      merged.back().weight += s.weight;
      continue;
    }
    merged.push_back(s);
  }
  return merged;
}

RenderedSpectrum render_spectrum(const std::vector<SpectrumLine>& lines, double fwhm,
                                 const std::vector<double>& grid) {
  if (!(fwhm > 0.0)) throw UsageError("broadening FWHM must be positive");
  RenderedSpectrum out;
  out.energy = grid;
  out.intensity.assign(grid.size(), 0.0);
  const double g = 0.5 * fwhm;
  for (const auto& s : lines) {
    if (grid.empty() || s.shift < grid.front() || s.shift > grid.back()) out.coverage_warning = true;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double x = grid[k] - s.shift;
      out.intensity[k] += s.weight * g / (units::kPi * (x * x + g * g));
    }
  }
  return out;
}

}  // namespace ulrm
