#include "ulrm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "ulrm/error.hpp"
#include "ulrm/units.hpp"

namespace ulrm {

namespace {

constexpr const char* kLetters = "SPDFGHIKLMNOQRTUVWXYZ";

const std::vector<std::string> kSpeciesNames = {"Rb", "Cs", "H"};

// Registers options on one subcommand and records how to copy their values
// into RunConfig::params once parsing is done.
class Binder {
 public:
  explicit Binder(CLI::App* sub) : sub_(sub) {}

  template <class T>
  CLI::Option* add(const std::string& key, T def, const std::string& desc) {
    auto v = std::make_shared<T>(def);
    auto* o = sub_->add_option("--" + key, *v, desc)->capture_default_str();
    sinks_.push_back([v, key](RunConfig& c) { c.params[key] = to_param(*v); });
    return o;
  }

  // No default: recorded only when given on the command line or in the config.
  template <class T>
  CLI::Option* add_optional(const std::string& key, const std::string& desc) {
    auto v = std::make_shared<T>();
    auto* o = sub_->add_option("--" + key, *v, desc);
    sinks_.push_back([v, key, o](RunConfig& c) {
      if (o->count() > 0) c.params[key] = to_param(*v);
    });
    return o;
  }

  CLI::Option* flag(const std::string& key, const std::string& desc) {
    auto v = std::make_shared<bool>(false);
    auto* o = sub_->add_flag("--" + key, *v, desc);
    sinks_.push_back([v, key](RunConfig& c) { c.params[key] = *v; });
    return o;
  }

  CLI::Option* output(std::string& out, const std::string& desc) {
    return sub_->add_option("--out", out, desc);
  }

  void apply(RunConfig& c) const {
    for (const auto& s : sinks_) s(c);
  }

 private:
  static ParamValue to_param(int v) { return static_cast<long long>(v); }
  static ParamValue to_param(long long v) { return v; }
  static ParamValue to_param(double v) { return v; }
  static ParamValue to_param(const std::string& v) { return v; }
  static ParamValue to_param(bool v) { return v; }

  CLI::App* sub_;
  std::vector<std::function<void(RunConfig&)>> sinks_;
};

const CLI::Validator kSpecies = CLI::IsMember(kSpeciesNames);
const CLI::Validator kOnOff = CLI::IsMember({"on", "off"});

void add_pec_options(Binder& b, double rmin, double rmax, long long points) {
  b.add<std::string>("rydberg", "Rb", "Rydberg atom species")->check(kSpecies);
  b.add<std::string>("state", "35S", "Rydberg state label, e.g. 35S or 42D");
  b.add<std::string>("perturber", "Rb", "ground-state perturber species")->check(kSpecies);
  b.add<std::string>("pwave", "off", "include the p-wave interaction (on|off)")->check(kOnOff);
  b.add<std::string>("basis", "auto", "basis: auto|single|manifold|extended")
      ->check(CLI::IsMember({"auto", "single", "manifold", "extended"}));
  b.add<std::string>("reference", "target", "energy zero: target|hydrogenic")
      ->check(CLI::IsMember({"target", "hydrogenic"}));
  b.add<double>("rmin", rmin, "inner edge of the R grid (a.u.); 0 picks 0.55 n*^2")->check(CLI::NonNegativeNumber);
  b.add<double>("rmax", rmax, "outer edge of the R grid (a.u.); 0 picks 2.6 n*^2")->check(CLI::NonNegativeNumber);
  b.add<long long>("points", points, "number of R samples")->check(CLI::Range(2LL, 200000LL));
  b.add<long long>("radial-points", 4000, "radial grid samples per state")->check(CLI::Range(100LL, 200000LL));
}

void validate_state(const RunConfig& c, const std::string& key) {
  try {
    parse_state_label(c.get_string(key));
  } catch (const Error& e) {
    throw UsageError("--" + key + ": " + e.what());
  }
}

}  // namespace

long long RunConfig::get_int(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw UsageError("missing parameter --" + key);
  if (auto p = std::get_if<long long>(&it->second)) return *p;
  throw UsageError("parameter --" + key + " is not an integer");
}

double RunConfig::get_double(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw UsageError("missing parameter --" + key);
  if (auto p = std::get_if<double>(&it->second)) return *p;
  if (auto p = std::get_if<long long>(&it->second)) return static_cast<double>(*p);
  throw UsageError("parameter --" + key + " is not a number");
}

const std::string& RunConfig::get_string(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw UsageError("missing parameter --" + key);
  if (auto p = std::get_if<std::string>(&it->second)) return *p;
  throw UsageError("parameter --" + key + " is not a string");
}

bool RunConfig::get_bool(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw UsageError("missing parameter --" + key);
  if (auto p = std::get_if<bool>(&it->second)) return *p;
  throw UsageError("parameter --" + key + " is not a flag");
}

std::pair<int, int> parse_state_label(const std::string& label) {
  std::size_t i = 0;
  while (i < label.size() && std::isdigit(static_cast<unsigned char>(label[i]))) ++i;
  if (i == 0 || i + 1 != label.size()) throw InvalidStateError("malformed state label '" + label + "'");
  const int n = std::stoi(label.substr(0, i));
  const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(label[i])));
  const char* pos = std::strchr(kLetters, letter);
  if (pos == nullptr) throw InvalidStateError("unknown orbital letter in '" + label + "'");
  const int l = static_cast<int>(pos - kLetters);
  if (n < 5) throw InvalidStateError("state '" + label + "' needs n >= 5");
  if (l >= n) throw InvalidStateError("state '" + label + "' needs l < n");
  return {n, l};
}

std::string state_label(int n, int l) {
  if (l < 0 || l >= static_cast<int>(std::strlen(kLetters))) return std::to_string(n) + "l" + std::to_string(l);
  return std::to_string(n) + kLetters[l];
}

RunConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"Ultralong-range Rydberg molecule potentials, levels, dipoles and spectra", "ulrm"};
  app.set_config("--config", "", "TOML/INI file with one [command] section of defaults");
  app.allow_config_extras(false);
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "help for every command");

  RunConfig cfg;
  std::vector<std::pair<CLI::App*, std::unique_ptr<Binder>>> subs;
  auto make = [&](const std::string& name, const std::string& desc) -> Binder& {
    auto* s = app.add_subcommand(name, desc);
    subs.emplace_back(s, std::make_unique<Binder>(s));
    return *subs.back().second;
  };

  {
    auto& b = make("species", "print bundled species data");
    b.flag("dump", "emit the full species table as JSON");
    b.output(cfg.output_path, "output file (stdout if omitted)");
  }
  {
    auto& b = make("radial", "radial wavefunction u(r) on the log grid");
    b.add<std::string>("species", "Rb", "species")->check(kSpecies);
    b.add<long long>("n", 35, "principal quantum number")->check(CLI::Range(5LL, 200LL));
    b.add<long long>("l", 0, "orbital quantum number")->check(CLI::Range(0LL, 199LL));
    b.add<long long>("points", 4000, "grid samples over [0.05, r_max]")->check(CLI::Range(100LL, 1000000LL));
    b.add<double>("rmax-factor", 3.0, "r_max in units of n^2")->check(CLI::Range(2.5, 10.0));
    b.output(cfg.output_path, "CSV output file");
  }
  {
    auto& b = make("scatter", "p-wave phase shift versus electron energy");
    b.add<std::string>("species", "Rb", "perturber species")->check(kSpecies);
    b.add<double>("emax-ev", 0.05, "largest electron energy (eV)")->check(CLI::PositiveNumber);
    b.add<long long>("points", 501, "energy samples")->check(CLI::Range(2LL, 1000000LL));
    b.add<double>("threshold", kDefaultDivergenceThreshold, "|tan delta| divergence threshold")
        ->check(CLI::PositiveNumber);
    b.output(cfg.output_path, "CSV output file");
  }
  {
    auto& b = make("pec", "adiabatic potential energy curves");
    add_pec_options(b, 0.0, 0.0, 1500);
    b.output(cfg.output_path, "CSV output file");
  }
  {
    auto& b = make("vib", "vibrational levels in a tabulated curve");
    b.add<std::string>("pec", "", "PEC CSV written by `ulrm pec`")->required();
    b.add<std::string>("well", "outermost", "well: outermost or its index x (1 = outermost)");
    b.add<std::string>("mu", "auto", "reduced mass in a.u., or auto from the PEC species");
    b.add<std::string>("curve", "target", "curve column: target or its index");
    b.add<long long>("levels", 2, "number of levels")->check(CLI::Range(1LL, 1000LL));
    b.add<long long>("grid", 800, "finite-difference points")->check(CLI::Range(20LL, 100000LL));
    b.add<double>("margin", 0.05, "domain margin as a fraction of the well width")->check(CLI::Range(0.0, 1.0));
    b.output(cfg.output_path, "JSON output file");
  }
  {
    auto& b = make("density", "electron density rho|psi|^2 of a tracked curve");
    add_pec_options(b, 0.0, 0.0, 1500);
    b.add<std::string>("well", "outermost", "evaluate at this well: outermost or index");
    b.add_optional<double>("R", "evaluate at this R (a.u.) instead of a well minimum")->check(CLI::PositiveNumber);
    b.add<long long>("rho-points", 201, "rho samples")->check(CLI::Range(2LL, 10000LL));
    b.add<long long>("z-points", 401, "z samples")->check(CLI::Range(2LL, 100000LL));
    b.output(cfg.output_path, "CSV output file");
  }
  {
    auto& b = make("dipole", "permanent electric dipole moment at a well minimum");
    add_pec_options(b, 0.0, 0.0, 1500);
    b.add<std::string>("well", "outermost", "well: outermost or index");
    b.add_optional<double>("R", "evaluate at this R (a.u.) instead of a well minimum")->check(CLI::PositiveNumber);
    b.output(cfg.output_path, "JSON output file");
  }
  {
    auto& b = make("spectrum", "polyatomic stick and broadened spectra");
    b.add<std::string>("rydberg", "Rb", "Rydberg species (Rb|Cs)")->check(CLI::IsMember({"Rb", "Cs"}));
    b.add<std::string>("state", "55S", "Rydberg state of the dimer quartet");
    b.add<long long>("max-atoms", 4, "atom-count cap")->check(CLI::Range(1LL, 10LL));
    b.add<std::string>("cap", "total", "cap mode: total|per-species")->check(CLI::IsMember({"total", "per-species"}));
    b.add<std::string>("quartet", "auto", "auto, or a,b,c,d in MHz");
    b.add<double>("broaden", 0.05, "Lorentzian FWHM (MHz)")->check(CLI::PositiveNumber);
    b.add<long long>("points", 4001, "energy grid samples")->check(CLI::Range(2LL, 10000000LL));
    b.add_optional<double>("lambda-rb", "Poisson mean Rb occupation")->check(CLI::NonNegativeNumber);
    b.add_optional<double>("lambda-cs", "Poisson mean Cs occupation")->check(CLI::NonNegativeNumber);
    b.output(cfg.output_path, "CSV output file (stick lines go to <out>.lines.json)");
  }
  {
    auto& b = make("scaling", "outermost-well level scaling with n");
    b.add<long long>("l", 2, "orbital quantum number of the state family")->check(CLI::Range(0LL, 2LL));
    b.add<long long>("nmin", 30, "first n")->check(CLI::Range(30LL, 60LL));
    b.add<long long>("nmax", 50, "last n")->check(CLI::Range(30LL, 60LL));
    b.add<std::string>("pwave", "off", "include the p-wave interaction (on|off)")->check(kOnOff);
    b.add<long long>("points", 800, "R samples per curve")->check(CLI::Range(50LL, 100000LL));
    b.output(cfg.output_path, "JSON output file");
  }
  {
    auto& b = make("regress", "run the regression manifest");
    b.add<std::string>("manifest", "", "manifest JSON (default: bundled data/regression.json)");
    b.add<std::string>("case", "", "run only this case id");
    b.output(cfg.output_path, "JSON report file");
  }

  try {
    // --config may follow the command name; CLI11 only knows it on the root app
    std::vector<std::string> args;
    std::vector<std::string> front;
    for (int i = 1; i < argc; ++i) {
      const std::string a = argv[i];
      if (a == "--config" && i + 1 < argc) {
        front.push_back(a);
        front.emplace_back(argv[++i]);
      } else if (a.rfind("--config=", 0) == 0) {
        front.push_back(a);
      } else {
        args.push_back(a);
      }
    }
    args.insert(args.begin(), front.begin(), front.end());
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (const auto& [sub, binder] : subs) {
    if (!sub->parsed()) continue;
    cfg.command = sub->get_name();
    binder->apply(cfg);
  }

  const auto& c = cfg;
  if (c.command == "radial" && c.get_int("l") >= c.get_int("n")) {
    throw UsageError("--l: must be smaller than --n");
  }
  if (c.command == "pec" || c.command == "density" || c.command == "dipole") {
    validate_state(c, "state");
    if (c.get_double("rmax") > 0.0 && c.get_double("rmin") >= c.get_double("rmax")) {
      throw UsageError("--rmin: must be smaller than --rmax");
    }
  }
  if (c.command == "spectrum") validate_state(c, "state");
  if (c.command == "scaling" && c.get_int("nmin") > c.get_int("nmax")) {
    throw UsageError("--nmin: must not exceed --nmax");
  }
  return cfg;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_metadata_line(const RunConfig& cfg, const std::map<std::string, std::string>& extra) {
  std::ostringstream os;
  os << "# schema_version=" << kSchemaVersion << " species_table=" << kSpeciesTableVersion
     << " command=" << cfg.command;
  for (const auto& [k, v] : cfg.params) {
    os << ' ' << k << '=';
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, bool>) os << (x ? "true" : "false");
          else if constexpr (std::is_same_v<T, double>) os << format_number(x);
          else os << x;
        },
        v);
  }
  for (const auto& [k, v] : extra) os << ' ' << k << '=' << v;
  os << '\n';
  return os.str();
}

std::string emit_radial_csv(const RadialWavefunction& wf, const RunConfig& cfg) {
  std::ostringstream os;
  os << csv_metadata_line(cfg, {{"energy_hartree", format_number(wf.state().energy)},
                                {"norm_error", format_number(wf.norm_error())}});
  os << "r_au,u\n";
  for (std::size_t i = 0; i < wf.r_grid().size(); ++i) {
    os << format_number(wf.r_grid()[i]) << ',' << format_number(wf.u()[i]) << '\n';
  }
  return os.str();
}

std::string emit_pec_csv(const PotentialCurveSet& pec, const RunConfig& cfg) {
  std::ostringstream os;
  os << csv_metadata_line(cfg, {{"rydberg_species", pec.rydberg_species},
                                {"perturber_species", pec.perturber_species},
                                {"reference_energy_hartree", format_number(pec.reference_energy)},
                                {"target_curve", std::to_string(pec.target_curve)},
                                {"basis_size", std::to_string(pec.basis.size())}});
  os << "R_au";
  for (std::size_t c = 0; c < pec.size(); ++c) os << ",curve_" << c << "_MHz";
  os << ",reliable\n";
  for (std::size_t i = 0; i < pec.R.size(); ++i) {
    os << format_number(pec.R[i]);
    for (std::size_t c = 0; c < pec.size(); ++c) os << ',' << format_number(units::hartree_to_mhz(pec.curves[c][i]));
    os << ',' << (pec.reliable[i] ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string emit_spectrum_csv(const RenderedSpectrum& spec, const RunConfig& cfg) {
  std::ostringstream os;
  os << csv_metadata_line(cfg, {{"coverage_warning", spec.coverage_warning ? "true" : "false"}});
  os << "energy_MHz,intensity\n";
  for (std::size_t i = 0; i < spec.energy.size(); ++i) {
    os << format_number(spec.energy[i]) << ',' << format_number(spec.intensity[i]) << '\n';
  }
  return os.str();
}

LoadedCurves parse_pec_csv(const std::string& text) {
  LoadedCurves out;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ms(line.substr(1));
      std::string tok;
      while (ms >> tok) {
        const auto eq = tok.find('=');
        if (eq != std::string::npos) out.metadata[tok.substr(0, eq)] = tok.substr(eq + 1);
      }
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (header.empty()) {
      header = cells;
      if (header.size() < 3 || header.front() != "R_au" || header.back() != "reliable") {
        throw IoError("not a PEC CSV: header must be R_au,curve_*_MHz,...,reliable");
      }
      out.curves.assign(header.size() - 2, {});
      continue;
    }
    if (cells.size() != header.size()) throw IoError("PEC CSV row has " + std::to_string(cells.size()) + " cells");
    try {
      out.R.push_back(std::stod(cells.front()));
      for (std::size_t c = 0; c + 2 < cells.size(); ++c) {
        out.curves[c].push_back(units::mhz_to_hartree(std::stod(cells[c + 1])));
      }
      out.reliable.push_back(cells.back() == "1");
    } catch (const std::logic_error&) {
      throw IoError("malformed number in PEC CSV");
    }
  }
  if (header.empty()) throw IoError("PEC CSV has no header row");
  return out;
}

LoadedCurves read_pec_csv(const std::filesystem::path& path) { return parse_pec_csv(read_text(path)); }

nlohmann::ordered_json make_envelope(const RunConfig& cfg, nlohmann::ordered_json payload) {
  nlohmann::ordered_json env;
  env["schema_version"] = kSchemaVersion;
  nlohmann::ordered_json cmd;
  cmd["command"] = cfg.command;
  for (const auto& [k, v] : cfg.params) {
    std::visit([&](const auto& x) { cmd[k] = x; }, v);
  }
  env["command"] = cmd;
  env["provenance"] = {{"species_table", std::string(kSpeciesTableVersion)},
                       {"divergence_threshold", kDefaultDivergenceThreshold},
                       {"csv_significant_digits", 12}};
  env["payload"] = std::move(payload);
  return env;
}

std::string emit_json(const nlohmann::ordered_json& envelope) { return envelope.dump(2) + "\n"; }

nlohmann::ordered_json parse_envelope(const std::string& text) {
  nlohmann::ordered_json env;
  try {
    env = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
  if (!env.contains("schema_version") || env["schema_version"] != kSchemaVersion) {
    throw IoError("unsupported or missing schema_version");
  }
  return env.at("payload");
}

nlohmann::ordered_json levels_to_json(const std::vector<VibrationalLevel>& levels) {
  auto sorted = levels;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.v < b.v; });
  auto arr = nlohmann::ordered_json::array();
  for (const auto& lv : sorted) {
    nlohmann::ordered_json j;
    j["v"] = lv.v;
    j["energy_MHz"] = lv.energy_shift;
    j["well_index"] = lv.well.index;
    j["well_Rmin_au"] = lv.well.R_min;
    j["well_Rleft_au"] = lv.well.R_left;
    j["well_Rright_au"] = lv.well.R_right;
    arr.push_back(std::move(j));
  }
  return arr;
}

nlohmann::ordered_json lines_to_json(const std::vector<SpectrumLine>& lines) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : lines) {
    arr.push_back({{"rydberg", s.rydberg_species}, {"i", s.i}, {"j", s.j}, {"shift_MHz", s.shift}, {"weight", s.weight}});
  }
  return arr;
}

nlohmann::ordered_json scaling_to_json(const std::vector<ScalingSeries>& series) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : series) {
    nlohmann::ordered_json j;
    j["rydberg"] = s.rydberg;
    j["perturber"] = s.perturber;
    j["slope"] = s.slope;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : s.rows) {
      nlohmann::ordered_json row;
      row["n"] = r.n;
      row["R_min_au"] = r.R_min;
      row["E_v0_MHz"] = r.E_v0;
      if (std::isfinite(r.E_v1)) row["E_v1_MHz"] = r.E_v1;
      else row["E_v1_MHz"] = nullptr;
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    arr.push_back(std::move(j));
  }
  return arr;
}

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << bytes;
    out.close();
    if (!out) throw IoError("write failed for " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write " + path.string());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace ulrm
