#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wavesel/devices.hpp"
#include "wavesel/ring_fit.hpp"
#include "wavesel/spectrum.hpp"

namespace wavesel {

enum class Command { simulate, analyze, fit, audit, sweep };
enum class ReportFormat { text, structured };

Command parse_command_name(const std::string& name);
std::string command_name(Command command);

double db_per_cm_to_per_m(double db_per_cm);
double per_m_to_db_per_cm(double alpha_per_m);

struct AnalysisOptions {
  double prominence = 0.1;
  // Half-width of each per-feature refinement window, in units of that
  // feature's interpolated FWHM.
  double fit_window_fwhm = 3.0;
};

struct NoiseOptions {
  double sigma = 0.0;  // additive Gaussian, clamped back into [0, 1]
};

struct FitOptions {
  RingPort port = RingPort::through;
  std::vector<RingParameter> free_parameters = {
      RingParameter::kappa, RingParameter::alpha, RingParameter::n_eff};
  int max_iterations = 500;
  ParameterBounds kappa_bounds{1e-6, 0.999};
  ParameterBounds alpha_bounds{0.0, 1e4};  // 1/m
  ParameterBounds n_eff_bounds{1.0, 5.0};
  ParameterBounds radius_bounds{1e-6, 1e-3};
};

struct SweepOptions {
  std::string parameter;
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 0;
};

// Output file names, resolved against the output directory. The report
// name gets ".txt" or ".json" appended depending on the report format.
struct OutputNames {
  std::string spectrum = "spectrum.csv";
  std::string report = "report";
  std::string features = "features.csv";
  std::string model = "model.csv";
  std::string residual = "residual.csv";
  std::string table = "sweep.csv";
};

// Parsed run configuration. Sections are optional at parse time; each
// command validates the pieces it needs.
struct RunConfig {
  std::optional<Command> command;
  std::optional<DeviceSpec> device;
  std::optional<WavelengthGrid> grid;
  std::optional<std::string> input_spectrum;
  std::optional<double> audit_wavelength_m;
  RingPort simulate_port = RingPort::through;
  AnalysisOptions analysis;
  NoiseOptions noise;
  FitOptions fit;
  std::optional<SweepOptions> sweep;
  OutputNames output;
  // "key = value (default)" notes for every default the parser filled in;
  // commands append the defaults they consume at run time.
  std::vector<std::string> defaults_applied;
};

// Parses "key = value" lines ('#' comments, blank lines allowed). Keys are
// dotted and units are encoded in key names (_nm, _um, _db_per_cm). Throws
// std::invalid_argument with the line number for malformed or unknown keys,
// including a pointer at the correctly-united key when only the unit suffix
// differs.
RunConfig parse_config_text(const std::string& text);

RunConfig load_config_file(const std::filesystem::path& path);

}  // namespace wavesel
