#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ulrm/pec.hpp"

namespace ulrm {

/// μ = m1 m2 / (m1 + m2).
double reduced_mass(double m1, double m2);

struct VibrationalLevel {
  int v = 0;
  double energy = 0.0;        // hartree, relative to the curve reference
  double energy_shift = 0.0;  // MHz, same reference
  std::vector<double> R;      // well grid (interior points)
  std::vector<double> chi;    // ∫χ² dR = 1, positive at the first antinode
  WellDescriptor well;
};

struct VibrationalOptions {
  int points = 800;
  double margin = 0.05;  // fraction of the well width added on each side
};

/// Finite-difference levels of [−∇²/2μ + V(R)] on a uniform cubic-spline
/// resampling of the well domain (hard walls), lowest `n_levels` requested,
/// only those below min(V(R_left), V(R_right)) returned.
/// Throws ResolutionError if the well covers fewer than 5 curve samples or
/// `points` < 20.
std::vector<VibrationalLevel> solve_vibrational(const std::vector<double>& R, const std::vector<double>& V,
                                                const WellDescriptor& well, double mu, int n_levels,
                                                const VibrationalOptions& options = {});

struct ScalingRow {
  int n = 0;
  double R_min = 0.0;
  double E_v0 = 0.0;  // MHz
  double E_v1 = 0.0;  // MHz (NaN when only one level is bound)
};

struct ScalingSeries {
  std::string rydberg;
  std::string perturber;
  std::vector<ScalingRow> rows;
  double slope = 0.0;  // d log|E_v0| / d log n
};

struct ScalingOptions {
  int l = 2;
  bool include_p_wave = false;
  std::size_t R_points = 800;
  double R_lo_factor = 1.2;  // × n*²
  double R_hi_factor = 2.4;
  VibrationalOptions vib;
};

/// Outermost-well ground and first excited levels versus n for the given
/// (Rydberg, perturber) pairs, with a least-squares log–log slope.
std::vector<ScalingSeries> scaling_study(const std::vector<std::pair<std::string, std::string>>& pairs,
                                         int n_lo, int n_hi, const ScalingOptions& options = {});

/// All four Rb/Cs combinations in the order RbRb, RbCs, CsRb, CsCs.
std::vector<std::pair<std::string, std::string>> all_species_pairs();

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct OuterWellResult {
  PotentialCurveSet curves;
  WellDescriptor well;
  std::vector<VibrationalLevel> levels;
};

/// Extended-basis diagonalization, tracked target curve, outermost well and its
/// lowest levels, for one (Rydberg state, perturber) pair.
OuterWellResult outer_well_levels(const SpeciesData& rydberg, int n, int l, const SpeciesData& perturber,
                                  double R_lo_factor, double R_hi_factor, std::size_t R_points,
                                  bool include_p_wave, int n_levels, const VibrationalOptions& vib = {});

}  // namespace ulrm
