#include "ulrm/units.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "ulrm/error.hpp"

namespace ulrm {

namespace {

double hartree_per_unit(EnergyUnit unit) {
  switch (unit) {
    case EnergyUnit::Hartree: return 1.0;
    case EnergyUnit::MHz: return 1.0 / units::kMHzPerHartree;
    case EnergyUnit::GHz: return 1.0 / units::kGHzPerHartree;
    case EnergyUnit::eV: return units::kHartreePerEV;
  }
  return 1.0;
}

}  // namespace

EnergyQuantity convert_energy(EnergyQuantity q, EnergyUnit target) {
  if (q.unit == target) return q;
  return {q.value * hartree_per_unit(q.unit) / hartree_per_unit(target), target};
}

EnergyUnit parse_energy_unit(std::string_view tag) {
  std::string t(tag);
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "hartree" || t == "au" || t == "a.u.") return EnergyUnit::Hartree;
  if (t == "mhz") return EnergyUnit::MHz;
  if (t == "ghz") return EnergyUnit::GHz;
  if (t == "ev") return EnergyUnit::eV;
  throw UsageError("invalid energy unit '" + std::string(tag) + "'");
}

std::string_view to_string(EnergyUnit unit) {
  switch (unit) {
    case EnergyUnit::Hartree: return "hartree";
    case EnergyUnit::MHz: return "MHz";
    case EnergyUnit::GHz: return "GHz";
    case EnergyUnit::eV: return "eV";
  }
  return "hartree";
}

}  // namespace ulrm
