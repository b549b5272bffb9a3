#pragma once

#include "ulrm/species.hpp"

namespace ulrm {

inline constexpr double kDefaultDivergenceThreshold = 50.0;

struct SemiclassicalK {
  double k = 0.0;
  bool forbidden = false;  // E + 1/r < 0, k clamped to 0
};

/// k(r) = sqrt(2 (E + 1/r)), clamped to 0 outside the classically allowed region.
SemiclassicalK semiclassical_k(double energy, double r);

/// Effective-range form a_s(k) = a0 + alpha * pi * k / 3.
double s_wave_length(const SpeciesData& species, double k);

struct PhaseShift {
  double delta = 0.0;
  double tan_delta = 0.0;
  bool extrapolated = false;  // E outside [0, 0.1 eV]
};

/// Breit–Wigner p-wave resonance with a k^3 threshold law:
///   tan δ = [Γ(E)/2 - b k^3 (E_res - E)] / (E_res - E),  Γ(E) = Γ (E/E_res)^{3/2}.
/// δ is taken on the branch (−π, π] continuous through E_res, so δ(E_res) = π/2.
PhaseShift p_wave_phase_shift(const SpeciesData& species, double electron_energy);

struct PWaveVolume {
  double value = 0.0;
  bool reliable = true;
};

/// a_p^3(k) = −tan δ_p / k^3, written in closed form so k → 0 is regular.
/// reliable = false where |tan δ_p| > threshold.
PWaveVolume p_wave_volume(const SpeciesData& species, double k,
                          double threshold = kDefaultDivergenceThreshold);

struct ScatteringEvaluation {
  double k = 0.0;
  bool forbidden = false;
  double a_s = 0.0;
  double a_p3 = 0.0;
  double delta_p = 0.0;
  bool reliable = true;
};

/// Everything the contact pseudopotential needs at perturber distance r for a
/// Rydberg electron of energy E.
ScatteringEvaluation evaluate_scattering(const SpeciesData& perturber, double energy, double r,
                                         double threshold = kDefaultDivergenceThreshold);

}  // namespace ulrm
