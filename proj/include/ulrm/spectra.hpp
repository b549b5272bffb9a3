#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ulrm {

/// Dimer ground-level shifts (MHz) for one Rydberg state: a = R̄b–Rb,
/// b = R̄b–Cs, c = C̄s–Rb, d = C̄s–Cs.
struct DimerEnergyQuartet {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  int n = 0;
  int l = 0;
};

struct SpectrumLine {
  std::string rydberg_species;
  int i = 0;  // Rb ground-state atoms
  int j = 0;  // Cs ground-state atoms
  double shift = 0.0;  // MHz
  double weight = 1.0;
};

/// ΔE = i a + j b (Rb Rydberg) or i c + j d (Cs Rydberg).
double polyatomic_shift(const DimerEnergyQuartet& q, const std::string& rydberg, int i, int j);

enum class AtomCap {
  Total,       // 1 <= i + j <= max
  PerSpecies,  // 0 <= i, j <= max, i + j >= 1
};

struct LineOptions {
  AtomCap cap = AtomCap::Total;
  /// Poisson occupation means (λ_Rb, λ_Cs); unset keeps unit weights.
  std::optional<double> lambda_rb;
  std::optional<double> lambda_cs;
  double merge_tolerance = 1e-3;  // MHz
};

/// All compositions within the cap, sorted by shift, coincident shifts merged
/// with summed weight. Throws UsageError if max_atoms > 10.
std::vector<SpectrumLine> enumerate_lines(const DimerEnergyQuartet& q, const std::string& rydberg,
                                          int max_atoms, const LineOptions& options = {});

struct RenderedSpectrum {
  std::vector<double> energy;     // MHz
  std::vector<double> intensity;
  bool coverage_warning = false;  // some line lies outside the grid
};

/// Sum of unit-area Lorentzians (FWHM in MHz) scaled by line weight.
RenderedSpectrum render_spectrum(const std::vector<SpectrumLine>& lines, double fwhm,
                                 const std::vector<double>& grid);

}  // namespace ulrm
