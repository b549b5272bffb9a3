#include "ulrm/scattering.hpp"

#include <cmath>
#include <limits>

#include "ulrm/error.hpp"
#include "ulrm/units.hpp"

namespace ulrm {

namespace {

const double kCalibratedWindow = units::ev_to_hartree(0.1);

}  // namespace

SemiclassicalK semiclassical_k(double energy, double r) {
  if (!(r > 0.0)) throw RangeError("semiclassical_k needs r > 0");
  const double t = 2.0 * (energy + 1.0 / r);
  if (t <= 0.0) return {0.0, t < 0.0};
  return {std::sqrt(t), false};
}

double s_wave_length(const SpeciesData& species, double k) {
  return species.a0 + species.alpha * units::kPi * k / 3.0;
}

PhaseShift p_wave_phase_shift(const SpeciesData& species, double electron_energy) {
  const auto& p = species.pwave;
  PhaseShift out;
  out.extrapolated = electron_energy < 0.0 || electron_energy > kCalibratedWindow;
  const double E = std::max(electron_energy, 0.0);
  const double k = std::sqrt(2.0 * E);
  const double gamma = p.Gamma * std::pow(E / p.E_res, 1.5);
  const double den = p.E_res - E;
  const double num = 0.5 * gamma - p.background * k * k * k * den;
  out.delta = std::atan2(num, den);
  out.tan_delta = den == 0.0 ? std::copysign(std::numeric_limits<double>::infinity(), num)
                             : num / den;
  return out;
}

PWaveVolume p_wave_volume(const SpeciesData& species, double k, double threshold) {
  if (k < 0.0) throw RangeError("p_wave_volume needs k >= 0");
  const auto& p = species.pwave;
  const double E = 0.5 * k * k;
  const double den = p.E_res - E;
  // Γ(E)/k^3 is k-independent: Γ / (2 E_res)^{3/2}
  const double g0 = p.Gamma / std::pow(2.0 * p.E_res, 1.5);
  PWaveVolume out;
  if (den == 0.0) {
    out.value = -std::numeric_limits<double>::infinity();
    out.reliable = false;
    return out;
  }
  out.value = -(0.5 * g0 - p.background * den) / den;
  const double tan_delta = -out.value * k * k * k;
  out.reliable = std::abs(tan_delta) <= threshold;
  return out;
}

ScatteringEvaluation evaluate_scattering(const SpeciesData& perturber, double energy, double r,
                                         double threshold) {
  ScatteringEvaluation ev;
  const auto kk = semiclassical_k(energy, r);
  ev.k = kk.k;
  ev.forbidden = kk.forbidden;
  ev.a_s = s_wave_length(perturber, ev.k);
  const auto vol = p_wave_volume(perturber, ev.k, threshold);
  ev.a_p3 = vol.value;
  ev.reliable = vol.reliable;
  ev.delta_p = p_wave_phase_shift(perturber, 0.5 * ev.k * ev.k).delta;
  return ev;
}

}  // namespace ulrm
