#pragma once

#include <string_view>

namespace ulrm {

// Hartree atomic units are used internally everywhere; these constants are
// only applied at I/O boundaries.
namespace units {

inline constexpr double kMHzPerHartree = 6.5796839207e9;
inline constexpr double kGHzPerHartree = kMHzPerHartree * 1e-3;
inline constexpr double kHartreePerEV = 3.6749322176e-2;
inline constexpr double kDebyePerAU = 2.541746;
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double hartree_to_mhz(double e) { return e * kMHzPerHartree; }
inline constexpr double mhz_to_hartree(double f) { return f / kMHzPerHartree; }
inline constexpr double ev_to_hartree(double e) { return e * kHartreePerEV; }
inline constexpr double hartree_to_ev(double e) { return e / kHartreePerEV; }

}  // namespace units

enum class EnergyUnit { Hartree, MHz, GHz, eV };

struct EnergyQuantity {
  double value = 0.0;
  EnergyUnit unit = EnergyUnit::Hartree;
};

/// Rescales `q` into `target`. Exact up to floating rounding.
EnergyQuantity convert_energy(EnergyQuantity q, EnergyUnit target);

/// Parses "hartree", "MHz", "GHz" or "eV" (case-insensitive).
/// Throws UsageError on an unknown tag.
EnergyUnit parse_energy_unit(std::string_view tag);
std::string_view to_string(EnergyUnit unit);

}  // namespace ulrm
