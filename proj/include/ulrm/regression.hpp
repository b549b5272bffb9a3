#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ulrm/spectra.hpp"
#include "ulrm/vibrational.hpp"

namespace ulrm {

/// Closed-form hydrogen u_nl(r) = r R_nl(r).
double hydrogen_u(int n, int l, double r);

/// RMS of (Numerov − analytic) for hydrogen (n, l) on the solver grid, with
/// the default 4000-point grid over [r_min, 2.5 n^2].
double hydrogen_rms(int n, int l);

struct LowLResult {
  WellDescriptor well;
  std::vector<VibrationalLevel> levels;
};

/// First-order s-wave curve of an isolated (n, l) state and the levels of its
/// outermost well.
LowLResult low_l_outer_levels(const SpeciesData& rydberg, int n, int l, const SpeciesData& perturber,
                              int n_levels = 2);

/// Outermost-well ground levels (MHz) of the four dimers for (n, l) from the
/// extended-basis s-wave curves.
DimerEnergyQuartet dimer_quartet(int n, int l);

struct DipoleResult {
  double R_min = 0.0;
  double dipole_debye = 0.0;
  double target_weight = 0.0;  // |c_target|^2
};

/// PEDM of the tracked extended-basis curve at its outermost well minimum.
DipoleResult outer_well_dipole(const SpeciesData& rydberg, int n, int l, const SpeciesData& perturber,
                               bool include_p_wave = false);

struct ButterflyResult {
  double R_well = 0.0;
  double mask_lo = 0.0;
  double mask_hi = 0.0;
  int mask_segments = 0;
};

/// Rb 35S extended basis with p-wave: the butterfly well is the least-bound
/// ripple minimum of the lowest adiabatic curve inside the masked window.
ButterflyResult butterfly_scan(double R_lo = 150.0, double R_hi = 1100.0, std::size_t points = 1900);

/// Lobe counts of the Rb n = `n` trilobite at its first `wells` wells.
std::vector<int> trilobite_lobes(int n = 35, int wells = 3);

struct CaseResult {
  std::string id;
  bool passed = false;
  std::string detail;
};

struct RegressionReport {
  std::vector<CaseResult> cases;
  bool all_passed() const;
};

/// Manifest from ULRM_DATA_DIR, else the source tree's data directory.
std::filesystem::path default_manifest_path();

/// Runs every case (or just `only`) of a manifest. ManifestError if the file is
/// missing or names an unknown command.
RegressionReport regression_run(const std::filesystem::path& manifest,
                                 const std::optional<std::string>& only = std::nullopt);

}  // namespace ulrm
