#include "ulrm/regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "ulrm/density.hpp"
#include "ulrm/error.hpp"
#include "ulrm/io.hpp"
#include "ulrm/units.hpp"

namespace ulrm {

double hydrogen_u(int n, int l, double r) {
  const double rho = 2.0 * r / n;
  const double log_norm = 1.5 * std::log(2.0 / n) +
                          0.5 * (std::lgamma(n - l) - std::log(2.0 * n) - std::lgamma(n + l + 1.0));
  const double lag = std::assoc_laguerre(static_cast<unsigned>(n - l - 1), static_cast<unsigned>(2 * l + 1), rho);
  if (rho <= 0.0) return 0.0;
  return r * std::exp(log_norm - 0.5 * rho + l * std::log(rho)) * lag;
}

double hydrogen_rms(int n, int l) {
  GridSpec g;
  g.r_max = 2.5 * n * n;
  g.log_step = std::log(g.r_max / 0.05) / 3999.0;
  const auto wf = solve_radial(make_state(species_lookup("H"), n, l), g);
  const auto& r = wf.r_grid();
  std::vector<double> ex(r.size());
  double dot = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    ex[i] = hydrogen_u(n, l, r[i]);
    dot += ex[i] * wf.u()[i];
  }
  const double s = dot < 0.0 ? -1.0 : 1.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = s * wf.u()[i] - ex[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(r.size()));
}

LowLResult low_l_outer_levels(const SpeciesData& rydberg, int n, int l, const SpeciesData& perturber,
                              int n_levels) {
  const auto wf = solve_radial(make_state(rydberg, n, l), GridSpec::for_n(n));
  const auto R = linspace(0.3 * n * n, 2.9 * n * n, 6000);
  const auto pec = pec_low_l_swave(wf, perturber, R);
  const auto wells = find_wells(R, pec.curves[0]);
  if (wells.empty()) throw ResolutionError("no well on the first-order curve");
  LowLResult out;
  out.well = wells.front();
  out.levels = solve_vibrational(R, pec.curves[0], out.well, reduced_mass(rydberg.mass, perturber.mass), n_levels);
  return out;
}

DimerEnergyQuartet dimer_quartet(int n, int l) {
  VibrationalOptions vib;
  vib.points = 1600;
  double e[4];
  const auto pairs = all_species_pairs();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto res = outer_well_levels(species_lookup(pairs[p].first), n, l, species_lookup(pairs[p].second),
                                       0.55, 2.6, 1500, false, 1, vib);
    if (res.levels.empty()) throw ResolutionError("no bound dimer level for the quartet");
    e[p] = res.levels[0].energy_shift;
  }
  return {e[0], e[1], e[2], e[3], n, l};
}

DipoleResult outer_well_dipole(const SpeciesData& rydberg, int n, int l, const SpeciesData& perturber,
                               bool include_p_wave) {
  const auto basis = prepare_basis(extended_basis(rydberg, n, l));
  const double ns = n - quantum_defect(rydberg, n, l);
  const auto R = linspace(0.55 * ns * ns, 2.6 * ns * ns, 1500);
  PecOptions opt;
  opt.include_p_wave = include_p_wave;
  opt.tracking = TrackingMode::TargetOnly;
  const auto pec = pec_diagonalize(basis, perturber, R, opt);
  const auto wells = find_wells(R, pec.curves[pec.target_curve]);
  if (wells.empty()) throw ResolutionError("no well on the tracked curve");
  const std::size_t i = nearest_index(R, wells.front().R_min);
  const auto& c = pec.eigvecs[pec.target_curve][i];
  DipoleResult out;
  out.R_min = R[i];
  out.dipole_debye = dipole_moment(basis, c);
  out.target_weight = c[static_cast<Eigen::Index>(basis.basis.target)] * c[static_cast<Eigen::Index>(basis.basis.target)];
  return out;
}

ButterflyResult butterfly_scan(double R_lo, double R_hi, std::size_t points) {
  const auto& rb = species_lookup("Rb");
  const auto basis = prepare_basis(extended_basis(rb, 35, 0));
  const auto R = linspace(R_lo, R_hi, points);
  PecOptions opt;
  opt.include_p_wave = true;
  opt.reference = ReferenceKind::HydrogenicLine;
  const auto pec = pec_diagonalize(basis, rb, R, opt);

  ButterflyResult out;
  bool in_mask = false;
  out.mask_lo = R_hi;
  for (std::size_t i = 0; i < R.size(); ++i) {
    if (!pec.reliable[i]) {
      if (!in_mask) ++out.mask_segments;
      out.mask_lo = std::min(out.mask_lo, R[i]);
      out.mask_hi = std::max(out.mask_hi, R[i]);
    }
    in_mask = !pec.reliable[i];
  }
  std::vector<double> low(R.size());
  for (std::size_t i = 0; i < R.size(); ++i) {
    double m = pec.curves[0][i];
    for (const auto& c : pec.curves) m = std::min(m, c[i]);
    low[i] = m;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < R.size(); ++i) {
    if (out.mask_segments > 0 && R[i] >= out.mask_lo) break;
    if (low[i] < low[i - 1] && low[i] <= low[i + 1] && low[i] > best) {
      best = low[i];
      out.R_well = R[i];
    }
  }
  if (!std::isfinite(best)) throw ResolutionError("no butterfly minimum inside the masked window");
  return out;
}

std::vector<int> trilobite_lobes(int n, int wells) {
  const auto& rb = species_lookup("Rb");
  const auto basis = prepare_basis(degenerate_manifold_basis(rb, n, 3));
  const double n2 = static_cast<double>(n) * n;
  const auto R = linspace(0.98 * n2, 2.12 * n2, 1400);
  const auto pec = pec_diagonalize(basis, rb, R);
  const auto& V = pec.curves[pec.target_curve];
  const auto found = find_wells(R, V);
  std::vector<int> out;
  DensityGrid grid;
  grid.rho = {0.5};
  grid.z = linspace(-2.3 * n2, 2.3 * n2, 12001);
  for (int x = 0; x < wells && x < static_cast<int>(found.size()); ++x) {
    const std::size_t i = nearest_index(R, found[static_cast<std::size_t>(x)].R_min);
    const auto map = electron_density(basis, pec.eigvecs[pec.target_curve][i], R[i], grid);
    out.push_back(lobe_count(map));
  }
  return out;
}

bool RegressionReport::all_passed() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.passed; });
}

std::filesystem::path default_manifest_path() {
  if (const char* dir = std::getenv("ULRM_DATA_DIR"); dir != nullptr && *dir != '\0') {
    auto p = std::filesystem::path(dir) / "regression.json";
    if (std::filesystem::exists(p)) return p;
  }
  return std::filesystem::path(ULRM_SOURCE_DATA_DIR) / "regression.json";
}

namespace {

bool within(double value, double expected, double rel_tol) {
  return std::abs(value - expected) <= rel_tol * std::abs(expected);
}

std::string fmt(double v) { return format_number(v); }

CaseResult run_case(const nlohmann::json& c) {
  CaseResult r;
  r.id = c.at("id").get<std::string>();
  const std::string cmd = c.at("command").get<std::string>();
  const auto params = c.value("params", nlohmann::json::object());
  const double tol = c.value("tolerance", 0.0);
  std::ostringstream d;

  if (cmd == "low-l-levels") {
    const auto [n, l] = parse_state_label(params.at("state").get<std::string>());
    const auto res = low_l_outer_levels(species_lookup(params.at("rydberg").get<std::string>()), n, l,
                                        species_lookup(params.at("perturber").get<std::string>()), 2);
    const auto v = params.at("level").get<std::size_t>();
    const double expected = c.at("expected").get<double>();
    if (v >= res.levels.size()) {
      d << "level v=" << v << " not bound";
    } else {
      const double e = res.levels[v].energy_shift;
      r.passed = within(e, expected, tol);
      d << "E_v" << v << " = " << fmt(e) << " MHz, expected " << fmt(expected) << " ± " << tol * 100 << "%";
    }
  } else if (cmd == "quartet") {
    const auto [n, l] = parse_state_label(params.at("state").get<std::string>());
    const auto q = dimer_quartet(n, l);
    const auto ex = c.at("expected").get<std::vector<double>>();
    const double got[4] = {q.a, q.b, q.c, q.d};
    r.passed = std::abs(q.d) > std::abs(q.c) && std::abs(q.c) > std::abs(q.b) && std::abs(q.b) > std::abs(q.a);
    for (int k = 0; k < 4; ++k) {
      r.passed = r.passed && within(got[k], ex[static_cast<std::size_t>(k)], tol);
      d << "abcd"[k] << '=' << fmt(got[k]) << " (" << fmt(ex[static_cast<std::size_t>(k)]) << ") ";
    }
  } else if (cmd == "hydrogen-oracle") {
    const double rms = hydrogen_rms(params.at("n").get<int>(), params.at("l").get<int>());
    r.passed = rms <= c.at("expected").get<double>();
    d << "RMS = " << fmt(rms) << ", bound " << fmt(c.at("expected").get<double>());
  } else if (cmd == "pwave-resonance") {
    const auto& sp = species_lookup(params.at("species").get<std::string>());
    double lo = 0.0, hi = units::ev_to_hartree(0.1);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (p_wave_phase_shift(sp, mid).delta < 0.5 * units::kPi ? lo : hi) = mid;
    }
    const double e_ev = units::hartree_to_ev(0.5 * (lo + hi));
    r.passed = within(e_ev, c.at("expected").get<double>(), tol);
    d << "delta_p = pi/2 at " << fmt(e_ev) << " eV";
  } else if (cmd == "butterfly") {
    const auto b = butterfly_scan();
    const double probe = params.value("mask_probe", 680.0);
    r.passed = within(b.R_well, c.at("expected").get<double>(), tol) && b.mask_segments == 1 &&
               b.mask_lo <= probe * 1.02 && b.mask_hi >= probe * 0.98;
    d << "well at " << fmt(b.R_well) << " a.u.; mask [" << fmt(b.mask_lo) << ", " << fmt(b.mask_hi) << "] in "
      << b.mask_segments << " segment(s)";
  } else if (cmd == "trilobite-lobes") {
    const auto ex = c.at("expected").get<std::vector<int>>();
    const auto got = trilobite_lobes(params.value("n", 35), static_cast<int>(ex.size()));
    r.passed = got == ex;
    d << "lobes";
    for (int g : got) d << ' ' << g;
  } else if (cmd == "pedm") {
    const auto [n, l] = parse_state_label(params.at("state").get<std::string>());
    const auto res = outer_well_dipole(species_lookup(params.at("rydberg").get<std::string>()), n, l,
                                       species_lookup(params.at("perturber").get<std::string>()));
    const double expected = c.at("expected").get<double>();
    r.passed = within(std::abs(res.dipole_debye), expected, tol);
    d << "d = " << fmt(res.dipole_debye) << " D at R = " << fmt(res.R_min) << ", expected " << fmt(expected)
      << " ± " << tol * 100 << "%";
  } else {
    throw ManifestError("case '" + r.id + "': unknown command '" + cmd + "'");
  }
  r.detail = d.str();
  return r;
}

}  // namespace

RegressionReport regression_run(const std::filesystem::path& manifest, const std::optional<std::string>& only) {
  if (!std::filesystem::exists(manifest)) throw ManifestError("missing regression manifest " + manifest.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError("malformed manifest " + manifest.string() + ": " + e.what());
  }
  if (!j.contains("cases") || !j["cases"].is_array()) throw ManifestError("manifest has no cases array");
  RegressionReport rep;
  for (const auto& c : j["cases"]) {
    if (!c.contains("id") || !c.contains("command") || !c.contains("expected")) {
      throw ManifestError("manifest case lacks id, command or expected");
    }
    if (only && c["id"].get<std::string>() != *only) continue;
    try {
      rep.cases.push_back(run_case(c));
    } catch (const ManifestError&) {
      throw;
    } catch (const nlohmann::json::exception& e) {
      throw ManifestError("case '" + c["id"].get<std::string>() + "': " + e.what());
    } catch (const Error& e) {
      rep.cases.push_back({c["id"].get<std::string>(), false, std::string("compute failure: ") + e.what()});
    }
  }
  if (only && rep.cases.empty()) throw ManifestError("no case '" + *only + "' in manifest");
  return rep;
}

}  // namespace ulrm
