#pragma once

#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ulrm/pec.hpp"
#include "ulrm/spectra.hpp"
#include "ulrm/vibrational.hpp"

namespace ulrm {

inline constexpr int kSchemaVersion = 1;

using ParamValue = std::variant<bool, long long, double, std::string>;

struct RunConfig {
  std::string command;
  std::map<std::string, ParamValue> params;
  std::string output_path;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  long long get_int(const std::string& key) const;
  double get_double(const std::string& key) const;
  const std::string& get_string(const std::string& key) const;
  bool get_bool(const std::string& key) const;
};

/// Thrown by parse_config for --help; what() holds the help text.
class HelpRequested : public std::exception {
 public:
  explicit HelpRequested(std::string text) : text_(std::move(text)) {}
  const char* what() const noexcept override { return text_.c_str(); }

 private:
  std::string text_;
};

/// Parses `ulrm <command> [options]`. A `--config FILE` (TOML/INI, one section
/// per command) supplies defaults; command-line flags win. Unknown keys and
/// invalid values raise UsageError naming the offending key.
RunConfig parse_config(int argc, const char* const* argv);

/// "35D" -> (35, 2). Letters S P D F G H I K... map to l = 0, 1, 2, ...
std::pair<int, int> parse_state_label(const std::string& label);
std::string state_label(int n, int l);

/// Fixed 12-significant-digit rendering used in every CSV.
std::string format_number(double v);

/// "# schema_version=1 species_table=... command=... key=value ..." line.
std::string csv_metadata_line(const RunConfig& cfg, const std::map<std::string, std::string>& extra = {});

std::string emit_radial_csv(const RadialWavefunction& wf, const RunConfig& cfg);
std::string emit_pec_csv(const PotentialCurveSet& pec, const RunConfig& cfg);
std::string emit_spectrum_csv(const RenderedSpectrum& spec, const RunConfig& cfg);

struct LoadedCurves {
  std::vector<double> R;
  std::vector<std::vector<double>> curves;  // hartree
  std::vector<bool> reliable;
  std::map<std::string, std::string> metadata;
};

/// Reads a CSV produced by emit_pec_csv.
LoadedCurves read_pec_csv(const std::filesystem::path& path);
LoadedCurves parse_pec_csv(const std::string& text);

/// {schema_version, command, provenance, payload} with deterministic key order.
nlohmann::ordered_json make_envelope(const RunConfig& cfg, nlohmann::ordered_json payload);
std::string emit_json(const nlohmann::ordered_json& envelope);
/// Parses an envelope and returns its payload; IoError on a schema mismatch.
nlohmann::ordered_json parse_envelope(const std::string& text);

nlohmann::ordered_json levels_to_json(const std::vector<VibrationalLevel>& levels);
nlohmann::ordered_json lines_to_json(const std::vector<SpectrumLine>& lines);
nlohmann::ordered_json scaling_to_json(const std::vector<ScalingSeries>& series);

/// Writes via a sibling temporary file and rename. IoError names the path.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);

std::string read_text(const std::filesystem::path& path);

}  // namespace ulrm
