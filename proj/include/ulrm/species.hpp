#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ulrm {

/// Rydberg–Ritz pair for one orbital angular momentum:
/// δ(n) = delta0 + delta2 / (n - delta0)^2.
struct RydbergRitz {
  double delta0 = 0.0;
  double delta2 = 0.0;
};

/// Triplet p-wave shape resonance. Energies in hartree, background volume in a.u.
struct PWaveResonanceParams {
  double E_res = 0.0;
  double Gamma = 0.0;
  double background = 0.0;
};

struct SpeciesData {
  std::string name;
  double mass = 0.0;   // electron masses
  double a0 = 0.0;     // zero-energy triplet s-wave scattering length
  double alpha = 0.0;  // ground-state dipole polarizability
  std::array<RydbergRitz, 4> defect_coeffs{};  // l = 0..3, zero beyond
  PWaveResonanceParams pwave;
  std::string provenance;
};

inline constexpr std::string_view kSpeciesTableVersion = "ulrm-species-2026.1";

/// Bundled data for "Rb", "Cs" or "H". When ULRM_DATA_DIR points at a
/// directory holding species.json, entries found there replace the bundled
/// ones (first lookup wins for the lifetime of the process).
const SpeciesData& species_lookup(std::string_view name);

/// The compiled-in table, ignoring any ULRM_DATA_DIR override.
const std::vector<SpeciesData>& bundled_species();

/// Reads a species table in the JSON layout produced by species_to_json.
std::vector<SpeciesData> load_species_table(const std::filesystem::path& path);

/// JSON text of a species table (the layout load_species_table reads).
std::string species_to_json(const std::vector<SpeciesData>& table);

/// Quantum defect for (n, l). Throws InvalidStateError unless n >= 1 and
/// 0 <= l < n.
double quantum_defect(const SpeciesData& species, int n, int l);

}  // namespace ulrm
