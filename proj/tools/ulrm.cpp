#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "ulrm/density.hpp"
#include "ulrm/error.hpp"
#include "ulrm/io.hpp"
#include "ulrm/regression.hpp"
#include "ulrm/units.hpp"

using namespace ulrm;

namespace {

void emit(const RunConfig& cfg, const std::string& bytes) {
  if (cfg.output_path.empty()) {
    std::cout << bytes;
  } else {
    write_atomic(cfg.output_path, bytes);
  }
}

std::vector<SpeciesData> active_species() {
  return {species_lookup("Rb"), species_lookup("Cs"), species_lookup("H")};
}

struct CurveJob {
  PreparedBasis basis;
  PotentialCurveSet pec;
};

CurveJob run_pec(const RunConfig& c) {
  const auto& ry = species_lookup(c.get_string("rydberg"));
  const auto& pe = species_lookup(c.get_string("perturber"));
  const auto [n, l] = parse_state_label(c.get_string("state"));
  std::string kind = c.get_string("basis");
  if (kind == "auto") kind = l <= 2 ? "extended" : "manifold";
  BasisSet b;
  if (kind == "single") b = single_state_basis(ry, n, l);
  else if (kind == "manifold") b = degenerate_manifold_basis(ry, n, std::min(l, 3));
  else b = extended_basis(ry, n, l);
  auto basis = prepare_basis(std::move(b), static_cast<int>(c.get_int("radial-points")));

  const double ns = n - quantum_defect(ry, n, l);
  const double rmin = c.get_double("rmin") > 0.0 ? c.get_double("rmin") : 0.55 * ns * ns;
  const double rmax = c.get_double("rmax") > 0.0 ? c.get_double("rmax") : 2.6 * ns * ns;
  if (rmin >= rmax) throw UsageError("--rmin: must be smaller than --rmax");
  PecOptions opt;
  opt.include_p_wave = c.get_string("pwave") == "on";
  opt.reference = c.get_string("reference") == "target" ? ReferenceKind::TargetState : ReferenceKind::HydrogenicLine;
  auto pec = pec_diagonalize(basis, pe, linspace(rmin, rmax, static_cast<std::size_t>(c.get_int("points"))), opt);
  return {std::move(basis), std::move(pec)};
}

std::size_t pick_index(const RunConfig& c, const PotentialCurveSet& pec, int& well_index) {
  const auto& V = pec.curves[pec.target_curve];
  if (c.has("R")) {
    well_index = 0;
    return nearest_index(pec.R, c.get_double("R"));
  }
  const auto wells = find_wells(pec.R, V);
  const std::string w = c.get_string("well");
  std::size_t k = 0;
  if (w != "outermost") {
    try {
      k = std::stoul(w) - 1;
    } catch (const std::logic_error&) {
      throw UsageError("--well: expected 'outermost' or a positive index");
    }
  }
  if (k >= wells.size()) throw ResolutionError("curve has only " + std::to_string(wells.size()) + " well(s)");
  well_index = wells[k].index;
  return nearest_index(pec.R, wells[k].R_min);
}

int cmd_species(const RunConfig& c) {
  const auto table = active_species();
  if (c.get_bool("dump")) {
    emit(c, species_to_json(table));
    return 0;
  }
  std::ostringstream os;
  for (const auto& s : table) {
    os << s.name << "  mass=" << format_number(s.mass) << "  a0=" << format_number(s.a0)
       << "  alpha=" << format_number(s.alpha) << '\n';
  }
  emit(c, os.str());
  return 0;
}

int cmd_radial(const RunConfig& c) {
  const auto& sp = species_lookup(c.get_string("species"));
  const int n = static_cast<int>(c.get_int("n"));
  const int l = static_cast<int>(c.get_int("l"));
  const auto wf = solve_radial(make_state(sp, n, l),
                               GridSpec::for_n(n, static_cast<int>(c.get_int("points")), c.get_double("rmax-factor")));
  emit(c, emit_radial_csv(wf, c));
  return 0;
}

int cmd_scatter(const RunConfig& c) {
  const auto& sp = species_lookup(c.get_string("species"));
  const double emax = c.get_double("emax-ev");
  const auto E = linspace(0.0, emax, static_cast<std::size_t>(c.get_int("points")));
  std::ostringstream os;
  os << csv_metadata_line(c);
  os << "E_eV,delta_p,tan_delta_p,reliable\n";
  for (double e : E) {
    const auto ps = p_wave_phase_shift(sp, units::ev_to_hartree(e));
    os << format_number(e) << ',' << format_number(ps.delta) << ',' << format_number(ps.tan_delta) << ','
       << (std::abs(ps.tan_delta) <= c.get_double("threshold") ? 1 : 0) << '\n';
  }
  emit(c, os.str());
  return 0;
}

int cmd_pec(const RunConfig& c) {
  const auto job = run_pec(c);
  emit(c, emit_pec_csv(job.pec, c));
  return 0;
}

int cmd_vib(const RunConfig& c) {
  const auto curves = read_pec_csv(c.get_string("pec"));
  std::size_t col = 0;
  const std::string which = c.get_string("curve");
  try {
    col = which == "target" ? std::stoul(curves.metadata.count("target_curve") ? curves.metadata.at("target_curve") : "0")
                            : std::stoul(which);
  } catch (const std::logic_error&) {
    throw UsageError("--curve: expected 'target' or a column index");
  }
  if (col >= curves.curves.size()) throw UsageError("--curve: index beyond the PEC columns");
  double mu = 0.0;
  if (c.get_string("mu") == "auto") {
    if (!curves.metadata.count("rydberg_species") || !curves.metadata.count("perturber_species")) {
      throw UsageError("--mu: PEC file lacks species metadata; give a value");
    }
    mu = reduced_mass(species_lookup(curves.metadata.at("rydberg_species")).mass,
                      species_lookup(curves.metadata.at("perturber_species")).mass);
  } else {
    try {
      mu = std::stod(c.get_string("mu"));
    } catch (const std::logic_error&) {
      throw UsageError("--mu: expected 'auto' or a number");
    }
  }
  const auto& V = curves.curves[col];
  const auto wells = find_wells(curves.R, V);
  const std::string w = c.get_string("well");
  std::size_t k = 0;
  if (w != "outermost") {
    try {
      k = std::stoul(w) - 1;
    } catch (const std::logic_error&) {
      throw UsageError("--well: expected 'outermost' or a positive index");
    }
  }
  if (k >= wells.size()) throw ResolutionError("curve has only " + std::to_string(wells.size()) + " well(s)");
  VibrationalOptions vo;
  vo.points = static_cast<int>(c.get_int("grid"));
  vo.margin = c.get_double("margin");
  const auto levels = solve_vibrational(curves.R, V, wells[k], mu, static_cast<int>(c.get_int("levels")), vo);
  emit(c, emit_json(make_envelope(c, levels_to_json(levels))));
  return 0;
}

int cmd_density(const RunConfig& c) {
  const auto job = run_pec(c);
  int well = 0;
  const std::size_t i = pick_index(c, job.pec, well);
  const double R = job.pec.R[i];
  const double n2 = std::pow(job.basis.basis.n_max(), 2);
  DensityGrid g;
  g.rho = linspace(0.0, 1.5 * n2, static_cast<std::size_t>(c.get_int("rho-points")));
  g.z = linspace(-2.1 * n2, 2.1 * n2, static_cast<std::size_t>(c.get_int("z-points")));
  const auto map = electron_density(job.basis, job.pec.eigvecs[job.pec.target_curve][i], R, g);
  if (map.uncovered > 0) {
    std::cerr << "warning: " << map.uncovered << " samples lie beyond the radial grids and were set to 0\n";
  }
  std::ostringstream os;
  os << csv_metadata_line(c, {{"R_au", format_number(R)}, {"well_index", std::to_string(well)}});
  os << "rho_au,z_au,value,phi\n";
  for (const double phi : {0.0, units::kPi}) {
    for (std::size_t a = 0; a < g.rho.size(); ++a) {
      for (std::size_t b = 0; b < g.z.size(); ++b) {
        os << format_number(g.rho[a]) << ',' << format_number(g.z[b]) << ',' << format_number(map.at(a, b)) << ','
           << format_number(phi) << '\n';
      }
    }
  }
  emit(c, os.str());
  return 0;
}

int cmd_dipole(const RunConfig& c) {
  const auto job = run_pec(c);
  int well = 0;
  const std::size_t i = pick_index(c, job.pec, well);
  const auto& v = job.pec.eigvecs[job.pec.target_curve][i];
  const auto t = static_cast<Eigen::Index>(job.basis.basis.target);
  nlohmann::ordered_json p;
  p["R_au"] = job.pec.R[i];
  p["well_index"] = well;
  p["dipole_debye"] = dipole_moment(job.basis, v);
  p["target_weight"] = v[t] * v[t];
  p["energy_MHz"] = units::hartree_to_mhz(job.pec.curves[job.pec.target_curve][i]);
  emit(c, emit_json(make_envelope(c, p)));
  return 0;
}

int cmd_spectrum(const RunConfig& c) {
  const auto [n, l] = parse_state_label(c.get_string("state"));
  DimerEnergyQuartet q;
  const std::string qs = c.get_string("quartet");
  if (qs == "auto") {
    q = dimer_quartet(n, l);
  } else {
    std::vector<double> v;
    std::stringstream ss(qs);
    std::string cell;
    try {
      while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    } catch (const std::logic_error&) {
      throw UsageError("--quartet: expected 'auto' or a,b,c,d");
    }
    if (v.size() != 4) throw UsageError("--quartet: expected four values a,b,c,d");
    q = {v[0], v[1], v[2], v[3], n, l};
  }
  LineOptions lo;
  lo.cap = c.get_string("cap") == "total" ? AtomCap::Total : AtomCap::PerSpecies;
  if (c.has("lambda-rb")) lo.lambda_rb = c.get_double("lambda-rb");
  if (c.has("lambda-cs")) lo.lambda_cs = c.get_double("lambda-cs");
  const auto lines = enumerate_lines(q, c.get_string("rydberg"), static_cast<int>(c.get_int("max-atoms")), lo);
  const double w = c.get_double("broaden");
  double lo_e = 0.0, hi_e = 0.0;
  for (const auto& s : lines) {
    lo_e = std::min(lo_e, s.shift);
    hi_e = std::max(hi_e, s.shift);
  }
  const auto grid = linspace(lo_e - 10.0 * w, hi_e + 10.0 * w, static_cast<std::size_t>(c.get_int("points")));
  const auto spec = render_spectrum(lines, w, grid);
  emit(c, emit_spectrum_csv(spec, c));
  if (!c.output_path.empty()) {
    nlohmann::ordered_json p;
    p["quartet_MHz"] = {{"a", q.a}, {"b", q.b}, {"c", q.c}, {"d", q.d}};
    p["lines"] = lines_to_json(lines);
    write_atomic(c.output_path + ".lines.json", emit_json(make_envelope(c, p)));
  }
  return 0;
}

int cmd_scaling(const RunConfig& c) {
  ScalingOptions so;
  so.l = static_cast<int>(c.get_int("l"));
  so.include_p_wave = c.get_string("pwave") == "on";
  so.R_points = static_cast<std::size_t>(c.get_int("points"));
  const auto series = scaling_study(all_species_pairs(), static_cast<int>(c.get_int("nmin")),
                                    static_cast<int>(c.get_int("nmax")), so);
  emit(c, emit_json(make_envelope(c, scaling_to_json(series))));
  return 0;
}

int cmd_regress(const RunConfig& c) {
  const std::string m = c.get_string("manifest");
  const std::string only = c.get_string("case");
  const auto rep = regression_run(m.empty() ? default_manifest_path() : std::filesystem::path(m),
                                  only.empty() ? std::nullopt : std::optional<std::string>(only));
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rep.cases) {
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.id << ": " << r.detail << '\n';
    arr.push_back({{"id", r.id}, {"passed", r.passed}, {"detail", r.detail}});
  }
  if (!c.output_path.empty()) emit(c, emit_json(make_envelope(c, arr)));
  return rep.all_passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const HelpRequested& h) {
    std::cout << h.what();
    return 0;
  } catch (const Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  }
  try {
    if (cfg.command == "species") return cmd_species(cfg);
    if (cfg.command == "radial") return cmd_radial(cfg);
    if (cfg.command == "scatter") return cmd_scatter(cfg);
    if (cfg.command == "pec") return cmd_pec(cfg);
    if (cfg.command == "vib") return cmd_vib(cfg);
    if (cfg.command == "density") return cmd_density(cfg);
    if (cfg.command == "dipole") return cmd_dipole(cfg);
    if (cfg.command == "spectrum") return cmd_spectrum(cfg);
    if (cfg.command == "scaling") return cmd_scaling(cfg);
    if (cfg.command == "regress") return cmd_regress(cfg);
    std::cerr << "usage error: unknown command\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const ManifestError& e) {
    std::cerr << "regression error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
