#include "wavesel/run.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wavesel/analysis.hpp"
#include "wavesel/audit.hpp"
#include "wavesel/constants.hpp"
#include "wavesel/devices.hpp"
#include "wavesel/ring_fit.hpp"
#include "wavesel/spectrum_io.hpp"

namespace wavesel {

namespace {

constexpr const char* kProvenanceName = "provenance.txt";
constexpr double kMinPointsPerFwhm = 20.0;

// Box-Muller over raw 53-bit uniforms so the stream depends only on the
// seed, not on library-specific distribution internals.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : rng_(seed) {}

  double sample() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform() {
    return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1p-53;
  }

  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

class Report {
 public:
  void add(const std::string& key, const std::string& value) {
    rows_.emplace_back(key, value);
    data_[key] = value;
  }
  void add(const std::string& key, const char* value) {
    add(key, std::string(value));
  }
  void add(const std::string& key, double value) {
    rows_.emplace_back(key, format_double(value));
    data_[key] = value;
  }
  void add(const std::string& key, std::size_t value) {
    rows_.emplace_back(key, std::to_string(value));
    data_[key] = value;
  }
  void add(const std::string& key, int value) {
    rows_.emplace_back(key, std::to_string(value));
    data_[key] = value;
  }
  void add(const std::string& key, bool value) {
    rows_.emplace_back(key, value ? "true" : "false");
    data_[key] = value;
  }
  void add_missing(const std::string& key) {
    rows_.emplace_back(key, "n/a");
    data_[key] = nullptr;
  }
  void attach(const std::string& key, nlohmann::ordered_json value) {
    data_[key] = std::move(value);
  }

  std::string text() const {
    std::string out;
    for (const auto& [key, value] : rows_) {
      out += key;
      out += " = ";
      out += value;
      out += '\n';
    }
    return out;
  }
  std::string structured() const { return data_.dump(2) + "\n"; }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
  nlohmann::ordered_json data_ = nlohmann::ordered_json::object();
};

std::filesystem::path resolve(const RunOptions& options,
                              const std::string& name) {
  return options.out_dir / name;
}

std::string report_file_name(const RunConfig& config,
                             const RunOptions& options) {
  return config.output.report +
         (options.format == ReportFormat::text ? ".txt" : ".json");
}

void ensure_distinct(const std::vector<std::string>& names) {
  std::set<std::string> seen;
  for (const std::string& name : names) {
    if (!seen.insert(name).second) {
      throw std::invalid_argument("output files collide on '" + name +
                                  "'; adjust the output.* names");
    }
  }
}

void write_report(const Report& report, const RunConfig& config,
                  const RunOptions& options, std::ostream& diagnostics) {
  const std::filesystem::path path =
      resolve(options, report_file_name(config, options));
  write_text_file_atomic(path, options.format == ReportFormat::text
                                   ? report.text()
                                   : report.structured());
  diagnostics << "wrote " << path.string() << "\n";
}

std::string note_section(const std::string& note) {
  std::string out;
  for (char c : note) {
    if (c == '.' || c == ' ') break;
    out += c;
  }
  return out;
}

bool note_applies(Command command, const std::string& note) {
  const std::string section = note_section(note);
  auto in = [&](std::initializer_list<const char*> sections) {
    return std::any_of(sections.begin(), sections.end(),
                       [&](const char* s) { return section == s; });
  };
  switch (command) {
    case Command::simulate:
      return in({"device", "grid", "noise", "simulate"});
    case Command::analyze:
      return in({"device", "grid", "noise", "analysis", "input"});
    case Command::fit:
      return in({"device", "analysis", "fit", "input"});
    case Command::audit:
      return in({"device", "grid", "noise", "analysis", "audit", "input"});
    case Command::sweep:
      return in({"device", "grid", "noise", "analysis", "sweep"});
  }
  return true;
}

const MicroringSpec* as_microring(const DeviceSpec& device) {
  return std::get_if<MicroringSpec>(&device);
}
const FabryPerotSpec* as_fabry_perot(const DeviceSpec& device) {
  return std::get_if<FabryPerotSpec>(&device);
}

bool is_resonator(const DeviceSpec& device) {
  return as_microring(device) != nullptr || as_fabry_perot(device) != nullptr;
}

Spectrum simulate_device(const DeviceSpec& device, const WavelengthGrid& grid,
                         RingPort port, std::ostream& diagnostics) {
  double per_fwhm = 0.0;
  Spectrum spectrum;
  if (const MicroringSpec* ring = as_microring(device)) {
    per_fwhm = estimated_points_per_fwhm(*ring, grid);
    spectrum = port == RingPort::through ? microring_through_spectrum(*ring, grid)
                                         : microring_drop_spectrum(*ring, grid);
  } else if (const FabryPerotSpec* cavity = as_fabry_perot(device)) {
    per_fwhm = estimated_points_per_fwhm(*cavity, grid);
    spectrum = fabry_perot_spectrum(*cavity, grid);
  } else {
    throw std::invalid_argument(
        "only microring and fabry_perot devices have transmission spectra");
  }
  if (per_fwhm < kMinPointsPerFwhm) {
    diagnostics << "warning: about " << format_double(per_fwhm)
                << " grid samples per linewidth (< 20); features may be "
                   "undersampled\n";
  }
  return spectrum;
}

// Measured input for analyze/audit: an explicit file when configured, a
// simulation of the configured device otherwise.
Spectrum acquire_spectrum(const RunConfig& config, const RunOptions& options,
                          std::ostream& diagnostics,
                          std::vector<std::string>& notes,
                          std::string& source_label) {
  if (config.input_spectrum.has_value()) {
    source_label = *config.input_spectrum;
    return read_spectrum_file(*config.input_spectrum);
  }
  if (config.device.has_value() && config.grid.has_value()) {
    source_label = "simulated";
    notes.push_back("input = simulated from device (no input.spectrum)");
    Spectrum spectrum = simulate_device(*config.device, *config.grid,
                                        config.simulate_port, diagnostics);
    add_noise(spectrum, config.noise.sigma, options.seed);
    return spectrum;
  }
  throw std::invalid_argument(
      "needs input.spectrum, or device.* plus grid.* to simulate one");
}

void add_feature_rows(Report& report, const SpectralMetrics& metrics) {
  report.add("median_center_nm", metrics.median_center_m * 1e9);
  report.add("median_fwhm_pm", metrics.median_fwhm_m * 1e12);
  report.add("q_factor", metrics.q_factor);
  if (metrics.fsr_m.has_value()) {
    report.add("fsr_nm", *metrics.fsr_m * 1e9);
    report.add("finesse", *metrics.finesse);
  } else {
    report.add_missing("fsr_nm");
    report.add_missing("finesse");
  }
}

int cmd_simulate(const RunConfig& config, const RunOptions& options,
                 std::ostream& diagnostics, std::vector<std::string>& notes) {
  (void)notes;
  if (!config.device.has_value() || !config.grid.has_value()) {
    throw std::invalid_argument("simulate needs device.* and grid.* settings");
  }
  ensure_distinct({config.output.spectrum, kProvenanceName});
  Spectrum spectrum = simulate_device(*config.device, *config.grid,
                                      config.simulate_port, diagnostics);
  add_noise(spectrum, config.noise.sigma, options.seed);
  const std::filesystem::path path = resolve(options, config.output.spectrum);
  write_spectrum_file(spectrum, path);
  diagnostics << "wrote " << path.string() << " (" << spectrum.size()
              << " samples)\n";
  return kExitOk;
}

int cmd_analyze(const RunConfig& config, const RunOptions& options,
                std::ostream& diagnostics, std::vector<std::string>& notes) {
  ensure_distinct({config.output.features, report_file_name(config, options),
                   kProvenanceName});
  std::string source_label;
  const Spectrum spectrum =
      acquire_spectrum(config, options, diagnostics, notes, source_label);
  const ResonanceScan scan =
      find_resonances(spectrum, config.analysis.prominence);

  std::vector<std::optional<double>> fitted_fwhm(scan.features.size());
  for (std::size_t i = 0; i < scan.features.size(); ++i) {
    try {
      const LorentzianFitResult fit = refine_feature(
          spectrum, scan.features[i], config.analysis.fit_window_fwhm);
      if (fit.converged) fitted_fwhm[i] = fit.params.fwhm_m;
    } catch (const std::exception&) {
      // Feature too close to the grid edge or degenerate: the interpolated
      // width still stands.
    }
  }

  std::string table;
  table += "center_nm,fwhm_pm,fitted_fwhm_pm,extremum_transmission,prominence,"
           "polarity\n";
  nlohmann::ordered_json features_json = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < scan.features.size(); ++i) {
    const ResonanceFeature& f = scan.features[i];
    const bool dip = f.polarity == FeaturePolarity::dip;
    table += format_double(f.center_m * 1e9);
    table += ',';
    table += format_double(f.fwhm_m * 1e12);
    table += ',';
    table += fitted_fwhm[i].has_value() ? format_double(*fitted_fwhm[i] * 1e12)
                                        : std::string("nan");
    table += ',';
    table += format_double(f.extremum_value);
    table += ',';
    table += format_double(f.prominence);
    table += ',';
    table += dip ? "dip" : "peak";
    table += '\n';

    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    row["center_nm"] = f.center_m * 1e9;
    row["fwhm_pm"] = f.fwhm_m * 1e12;
    if (fitted_fwhm[i].has_value()) {
      row["fitted_fwhm_pm"] = *fitted_fwhm[i] * 1e12;
    } else {
      row["fitted_fwhm_pm"] = nullptr;
    }
    row["extremum_transmission"] = f.extremum_value;
    row["prominence"] = f.prominence;
    row["polarity"] = dip ? "dip" : "peak";
    features_json.push_back(std::move(row));
  }
  const std::filesystem::path features_path =
      resolve(options, config.output.features);
  write_text_file_atomic(features_path, table);
  diagnostics << "wrote " << features_path.string() << "\n";

  Report report;
  report.add("command", "analyze");
  report.add("input", source_label);
  report.add("polarity",
             scan.polarity == FeaturePolarity::dip ? "dip" : "peak");
  report.add("feature_count", scan.features.size());
  report.add("dropped", scan.dropped);
  if (!scan.features.empty()) {
    add_feature_rows(report, compute_metrics(scan.features));
  } else {
    report.add_missing("median_center_nm");
    report.add_missing("median_fwhm_pm");
    report.add_missing("q_factor");
    report.add_missing("fsr_nm");
    report.add_missing("finesse");
  }
  report.attach("features", std::move(features_json));
  write_report(report, config, options, diagnostics);
  diagnostics << "analyze: " << scan.features.size() << " feature(s), "
              << scan.dropped << " dropped\n";
  return kExitOk;
}

int cmd_fit(const RunConfig& config, const RunOptions& options,
            std::ostream& diagnostics, std::vector<std::string>& notes) {
  (void)notes;
  if (!config.device.has_value() || as_microring(*config.device) == nullptr) {
    throw std::invalid_argument(
        "fit needs device.kind = microring as the starting point");
  }
  if (!config.input_spectrum.has_value()) {
    throw std::invalid_argument("fit needs input.spectrum (measured data)");
  }
  ensure_distinct({config.output.model, config.output.residual,
                   report_file_name(config, options), kProvenanceName});

  RingFitProblem problem;
  problem.data = read_spectrum_file(*config.input_spectrum);
  problem.port = config.fit.port;
  problem.initial = *as_microring(*config.device);
  problem.free_parameters = config.fit.free_parameters;
  problem.kappa_bounds = config.fit.kappa_bounds;
  problem.alpha_bounds = config.fit.alpha_bounds;
  problem.n_eff_bounds = config.fit.n_eff_bounds;
  problem.radius_bounds = config.fit.radius_bounds;
  problem.max_iterations = config.fit.max_iterations;
  problem.prominence_threshold = config.analysis.prominence;

  const RingFitResult result = fit_microring(problem);

  const Spectrum residual = residual_curve(result.params, problem);
  Spectrum model;
  model.wavelength_m = problem.data.wavelength_m;
  model.transmission.resize(problem.data.size());
  for (std::size_t i = 0; i < model.transmission.size(); ++i) {
    model.transmission[i] =
        residual.transmission[i] + problem.data.transmission[i];
  }
  const std::filesystem::path model_path = resolve(options, config.output.model);
  write_spectrum_file(model, model_path);
  diagnostics << "wrote " << model_path.string() << "\n";

  std::string residual_table = "wavelength_nm,residual\n";
  for (std::size_t i = 0; i < residual.size(); ++i) {
    residual_table += format_double(residual.wavelength_m[i] * 1e9);
    residual_table += ',';
    residual_table += format_double(residual.transmission[i]);
    residual_table += '\n';
  }
  const std::filesystem::path residual_path =
      resolve(options, config.output.residual);
  write_text_file_atomic(residual_path, residual_table);
  diagnostics << "wrote " << residual_path.string() << "\n";

  Report report;
  report.add("command", "fit");
  report.add("input", *config.input_spectrum);
  report.add("port", config.fit.port == RingPort::through ? "through" : "drop");
  report.add("converged", result.converged);
  report.add("ill_conditioned", result.ill_conditioned);
  report.add("iterations", result.iterations);
  report.add("rms_residual", result.rms_residual);
  report.add("kappa1", result.params.kappa1);
  report.add("kappa2", result.params.kappa2);
  report.add("alpha_per_m", result.params.alpha_per_m);
  report.add("alpha_db_per_cm", per_m_to_db_per_cm(result.params.alpha_per_m));
  report.add("n_eff", result.params.n_eff);
  report.add("radius_um", result.params.radius_m * 1e6);
  if (!result.covariance_diag.empty()) {
    for (std::size_t j = 0; j < problem.free_parameters.size(); ++j) {
      std::string name;
      switch (problem.free_parameters[j]) {
        case RingParameter::kappa: name = "kappa"; break;
        case RingParameter::alpha: name = "alpha"; break;
        case RingParameter::n_eff: name = "n_eff"; break;
        case RingParameter::radius: name = "radius"; break;
      }
      report.add("variance_" + name, result.covariance_diag[j]);
    }
  }
  write_report(report, config, options, diagnostics);

  if (result.ill_conditioned) {
    diagnostics << "warning: fit is ill-conditioned; parameter directions are "
                   "poorly distinguished on this data\n";
  }
  if (!result.converged) {
    diagnostics << "fit did not converge in " << result.iterations
                << " iteration(s); best parameters reported\n";
    return kExitNoConvergence;
  }
  diagnostics << "fit converged in " << result.iterations << " iteration(s)\n";
  return kExitOk;
}

int cmd_audit(const RunConfig& config, const RunOptions& options,
              std::ostream& diagnostics, std::vector<std::string>& notes) {
  if (!config.device.has_value()) {
    throw std::invalid_argument("audit needs device.* settings");
  }
  ensure_distinct({report_file_name(config, options), kProvenanceName});

  SpectralMetrics metrics;
  double wavelength_m = 0.0;
  if (is_resonator(*config.device)) {
    std::string source_label;
    const Spectrum spectrum =
        acquire_spectrum(config, options, diagnostics, notes, source_label);
    const ResonanceScan scan =
        find_resonances(spectrum, config.analysis.prominence);
    if (scan.features.empty()) {
      throw std::invalid_argument(
          "audit found no features in the input spectrum");
    }
    metrics = compute_metrics(scan.features);
    if (config.audit_wavelength_m.has_value()) {
      wavelength_m = *config.audit_wavelength_m;
    } else {
      wavelength_m = metrics.median_center_m;
      notes.push_back("audit.wavelength_nm = median feature center (default)");
    }
  } else {
    if (!config.audit_wavelength_m.has_value()) {
      throw std::invalid_argument(
          "audit of dispersive devices needs audit.wavelength_nm");
    }
    wavelength_m = *config.audit_wavelength_m;
  }

  const HupReport audit = audit_device(*config.device, metrics, wavelength_m);

  Report report;
  report.add("command", "audit");
  report.add("device", audit.device_summary);
  report.add("wavelength_nm", audit.wavelength_m * 1e9);
  report.add("delta_t_s", audit.delta_t_s);
  report.add("delta_l_m", audit.delta_l_m);
  report.add("min_uncertainty_bound_pm", audit.min_uncertainty_bound_m * 1e12);
  report.add("resonator_bound_pm", audit.resonator_bound_m * 1e12);
  report.add("linewidth_pm", audit.linewidth_m * 1e12);
  report.add("ratio_min_uncertainty", audit.ratio_min_uncertainty);
  report.add("ratio_resonator", audit.ratio_resonator);
  report.add("verdict", audit.pass ? "pass" : "violation");
  write_report(report, config, options, diagnostics);

  diagnostics << "audit verdict: " << (audit.pass ? "pass" : "violation")
              << " (linewidth " << format_double(audit.linewidth_m * 1e12)
              << " pm vs floor "
              << format_double(audit.min_uncertainty_bound_m * 1e12)
              << " pm)\n";
  return audit.pass ? kExitOk : kExitBoundViolation;
}

void apply_sweep_value(DeviceSpec& device, const std::string& parameter,
                       double value) {
  if (MicroringSpec* ring = std::get_if<MicroringSpec>(&device)) {
    if (parameter == "radius_um") {
      ring->radius_m = value * 1e-6;
    } else if (parameter == "n_eff") {
      ring->n_eff = value;
    } else if (parameter == "kappa") {
      ring->kappa1 = ring->kappa2 = value;
    } else if (parameter == "alpha_db_per_cm") {
      ring->alpha_per_m = db_per_cm_to_per_m(value);
    } else {
      throw std::invalid_argument(
          "sweep.parameter for a microring must be radius_um, n_eff, kappa, "
          "or alpha_db_per_cm");
    }
    return;
  }
  if (FabryPerotSpec* cavity = std::get_if<FabryPerotSpec>(&device)) {
    if (parameter == "length_um") {
      cavity->length_m = value * 1e-6;
    } else if (parameter == "n") {
      cavity->refractive_index = value;
    } else if (parameter == "mirror_reflectance") {
      cavity->mirror_reflectance = value;
    } else {
      throw std::invalid_argument(
          "sweep.parameter for a fabry_perot cavity must be length_um, n, or "
          "mirror_reflectance");
    }
    return;
  }
  throw std::invalid_argument("sweep supports microring and fabry_perot");
}

int cmd_sweep(const RunConfig& config, const RunOptions& options,
              std::ostream& diagnostics, std::vector<std::string>& notes) {
  (void)notes;
  if (!config.device.has_value() || !config.grid.has_value() ||
      !config.sweep.has_value()) {
    throw std::invalid_argument("sweep needs device.*, grid.*, and sweep.*");
  }
  ensure_distinct({config.output.table, kProvenanceName});
  const SweepOptions& sweep = *config.sweep;

  std::string table;
  table += sweep.parameter;
  table += ",feature_count,fsr_nm,median_fwhm_pm,finesse,q_factor\n";

  std::ostringstream muted;
  for (std::size_t i = 0; i < sweep.points; ++i) {
    const double value =
        sweep.start + (sweep.stop - sweep.start) * static_cast<double>(i) /
                          static_cast<double>(sweep.points - 1);
    DeviceSpec device = *config.device;
    apply_sweep_value(device, sweep.parameter, value);
    std::visit([](const auto& spec) { spec.validate(); }, device);

    // Undersampling warnings would repeat per point; surface the first only.
    std::ostream& sink = i == 0 ? diagnostics : muted;
    Spectrum spectrum =
        simulate_device(device, *config.grid, config.simulate_port, sink);
    add_noise(spectrum, config.noise.sigma,
              options.seed + static_cast<std::uint64_t>(i));

    const ResonanceScan scan =
        find_resonances(spectrum, config.analysis.prominence);
    table += format_double(value);
    table += ',';
    table += std::to_string(scan.features.size());
    if (scan.features.empty()) {
      table += ",nan,nan,nan,nan\n";
      continue;
    }
    const SpectralMetrics metrics = compute_metrics(scan.features);
    table += ',';
    table += metrics.fsr_m.has_value() ? format_double(*metrics.fsr_m * 1e9)
                                       : std::string("nan");
    table += ',';
    table += format_double(metrics.median_fwhm_m * 1e12);
    table += ',';
    table += metrics.finesse.has_value() ? format_double(*metrics.finesse)
                                         : std::string("nan");
    table += ',';
    table += format_double(metrics.q_factor);
    table += '\n';
  }

  const std::filesystem::path table_path = resolve(options, config.output.table);
  write_text_file_atomic(table_path, table);
  diagnostics << "wrote " << table_path.string() << " (" << sweep.points
              << " rows)\n";
  return kExitOk;
}

}  // namespace

void add_noise(Spectrum& spectrum, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("noise sigma must be >= 0 and finite");
  }
  if (sigma == 0.0) return;
  NoiseSource source(seed);
  for (double& t : spectrum.transmission) {
    t = std::clamp(t + sigma * source.sample(), 0.0, 1.0);
  }
}

int run_command(Command command, const RunConfig& config,
                const RunOptions& options, std::ostream& diagnostics) {
  if (config.command.has_value() && *config.command != command) {
    throw std::invalid_argument(
        "config file names command '" + command_name(*config.command) +
        "' but '" + command_name(command) + "' was invoked");
  }
  std::filesystem::create_directories(options.out_dir);

  std::vector<std::string> notes;
  for (const std::string& note : config.defaults_applied) {
    if (note_applies(command, note)) notes.push_back(note);
  }

  int code = kExitOk;
  switch (command) {
    case Command::simulate:
      code = cmd_simulate(config, options, diagnostics, notes);
      break;
    case Command::analyze:
      code = cmd_analyze(config, options, diagnostics, notes);
      break;
    case Command::fit:
      code = cmd_fit(config, options, diagnostics, notes);
      break;
    case Command::audit:
      code = cmd_audit(config, options, diagnostics, notes);
      break;
    case Command::sweep:
      code = cmd_sweep(config, options, diagnostics, notes);
      break;
  }

  if (!notes.empty()) {
    std::string provenance;
    for (const std::string& note : notes) {
      provenance += note;
      provenance += '\n';
      diagnostics << "note: " << note << "\n";
    }
    write_text_file_atomic(resolve(options, kProvenanceName), provenance);
  }
  return code;
}

}  // namespace wavesel
