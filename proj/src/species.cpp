#include "ulrm/species.hpp"

#include <cstdlib>
#include <fstream>

#include "json.hpp"

#include "ulrm/error.hpp"
#include "ulrm/units.hpp"

namespace ulrm {

namespace {

// j-averaged Rydberg–Ritz coefficients (weights 2j+1). Sources:
//   Rb: nS/nP/nD  Li et al., PRA 67, 052502 (2003); Mack et al., PRA 83, 052515 (2011)
//       nF        Han et al., PRA 74, 054502 (2006)
//   Cs: nS/nP/nD  Weber & Sansonetti, PRA 35, 4650 (1987)
//       nF        Goy et al., PRA 26, 2733 (1982)
// Scattering data a0, alpha and masses as used for the Rb/Cs ULRM calculations.
// The Cs p-wave resonance is an external estimate of the 3P shape resonance.
std::vector<SpeciesData> make_bundled() {
  std::vector<SpeciesData> table;

  SpeciesData rb;
  rb.name = "Rb";
  rb.mass = 158432.0;
  rb.a0 = -18.5;
  rb.alpha = 319.2;
  rb.defect_coeffs = {{{3.1311804, 0.1784},
                       {2.6460774, 0.2933333},
                       {1.3471161, -0.598744},
                       {0.0165332, -0.0855714}}};
  rb.pwave = {units::ev_to_hartree(0.026), units::ev_to_hartree(0.030), 0.0};
  rb.provenance =
      "defects: Li 2003 / Mack 2011 / Han 2006 (j-averaged); a0, alpha, mass: ULRM "
      "literature values; p-wave E_res = 0.026 eV calibrated, Gamma assumed";
  table.push_back(rb);

  SpeciesData cs;
  cs.name = "Cs";
  cs.mass = 242282.0;
  cs.a0 = -21.7;
  cs.alpha = 400.8;
  cs.defect_coeffs = {{{4.049325, 0.2462},
                       {3.5698907, 0.3731333},
                       {2.469872, 0.23218},
                       {0.0334749, -0.191}}};
  cs.pwave = {units::ev_to_hartree(0.008), units::ev_to_hartree(0.010), 0.0};
  cs.provenance =
      "defects: Weber & Sansonetti 1987 / Goy 1982 (j-averaged); a0, alpha, mass: ULRM "
      "literature values; p-wave resonance externally sourced estimate (not calibrated)";
  table.push_back(cs);

  SpeciesData h;
  h.name = "H";
  h.mass = 1836.15;
  h.a0 = -18.5;
  h.alpha = 319.2;
  h.defect_coeffs = {};
  h.pwave = rb.pwave;
  h.provenance = "analytic oracle: zero quantum defects, proton mass; scattering data borrowed from Rb";
  table.push_back(h);

  return table;
}

SpeciesData species_from_json(const nlohmann::json& j) {
  SpeciesData s;
  s.name = j.at("name").get<std::string>();
  s.mass = j.at("mass").get<double>();
  s.a0 = j.at("a0").get<double>();
  s.alpha = j.at("alpha").get<double>();
  const auto& d = j.at("defect_coeffs");
  if (d.size() != 4) throw UsageError("species '" + s.name + "': defect_coeffs needs 4 rows");
  for (std::size_t l = 0; l < 4; ++l) {
    s.defect_coeffs[l] = {d[l].at(0).get<double>(), d[l].at(1).get<double>()};
  }
  const auto& p = j.at("pwave");
  s.pwave = {p.at("E_res").get<double>(), p.at("Gamma").get<double>(),
             p.at("background").get<double>()};
  s.provenance = j.value("provenance", std::string{});
  if (s.mass <= 0 || s.alpha <= 0 || s.pwave.E_res <= 0 || s.pwave.Gamma <= 0) {
    throw UsageError("species '" + s.name + "': invalid physical constants");
  }
  return s;
}

const std::vector<SpeciesData>& active_table() {
  static const std::vector<SpeciesData> table = [] {
    auto t = make_bundled();
    if (const char* dir = std::getenv("ULRM_DATA_DIR"); dir != nullptr && *dir != '\0') {
      std::filesystem::path p = std::filesystem::path(dir) / "species.json";
      if (std::filesystem::exists(p)) {
        for (auto& s : load_species_table(p)) {
          bool replaced = false;
          for (auto& b : t) {
            if (b.name == s.name) {
              b = s;
              replaced = true;
            }
          }
          if (!replaced) t.push_back(s);
        }
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

const std::vector<SpeciesData>& bundled_species() {
  static const std::vector<SpeciesData> table = make_bundled();
  return table;
}

std::vector<SpeciesData> load_species_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open species table " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed species table " + path.string() + ": " + e.what());
  }
  std::vector<SpeciesData> out;
  for (const auto& entry : j.at("species")) out.push_back(species_from_json(entry));
  return out;
}

std::string species_to_json(const std::vector<SpeciesData>& table) {
  nlohmann::ordered_json j;
  j["table_version"] = std::string(kSpeciesTableVersion);
  j["units"] = "hartree atomic units";
  auto& arr = j["species"] = nlohmann::ordered_json::array();
  for (const auto& s : table) {
    nlohmann::ordered_json e;
    e["name"] = s.name;
    e["mass"] = s.mass;
    e["a0"] = s.a0;
    e["alpha"] = s.alpha;
    auto& d = e["defect_coeffs"] = nlohmann::ordered_json::array();
    for (const auto& c : s.defect_coeffs) d.push_back({c.delta0, c.delta2});
    e["pwave"] = {{"E_res", s.pwave.E_res}, {"Gamma", s.pwave.Gamma}, {"background", s.pwave.background}};
    e["provenance"] = s.provenance;
    arr.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

const SpeciesData& species_lookup(std::string_view name) {
  for (const auto& s : active_table()) {
    if (s.name == name) return s;
  }
  throw UnknownSpeciesError(std::string(name));
}

double quantum_defect(const SpeciesData& species, int n, int l) {
  if (n < 1 || l < 0 || l >= n) {
    throw InvalidStateError("invalid Rydberg state n=" + std::to_string(n) +
                            " l=" + std::to_string(l) + " (need 0 <= l < n)");
  }
  if (l >= static_cast<int>(species.defect_coeffs.size())) return 0.0;
  const auto& c = species.defect_coeffs[static_cast<std::size_t>(l)];
  if (c.delta0 == 0.0 && c.delta2 == 0.0) return 0.0;
  const double nd = n - c.delta0;
  return c.delta0 + c.delta2 / (nd * nd);
}

}  // namespace ulrm
