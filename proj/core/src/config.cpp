#include "wavesel/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace wavesel {

namespace {

constexpr double kDbPerCmFactor = 23.025850929940457;  // 10 * ln(10)
constexpr double kDefaultGridStepNm = 0.0005;          // 0.5 pm
constexpr std::size_t kMaxGridPoints = 20000001;

struct Entry {
  std::string value;
  std::size_t line = 0;
  bool consumed = false;
};

using EntryMap = std::map<std::string, Entry>;

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " +
                              what);
}

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

// Every key the format understands, with the unit its suffix encodes.
struct KnownKey {
  const char* key;
  const char* unit;  // nullptr for dimensionless/string keys
};

constexpr KnownKey kKnownKeys[] = {
    {"command", nullptr},
    {"device.kind", nullptr},
    {"device.radius_um", "micrometers"},
    {"device.n_eff", nullptr},
    {"device.kappa", nullptr},
    {"device.kappa1", nullptr},
    {"device.kappa2", nullptr},
    {"device.alpha_db_per_cm", "dB per centimeter"},
    {"device.margin_um", "micrometers"},
    {"device.n", nullptr},
    {"device.length_um", "micrometers"},
    {"device.mirror_reflectance", nullptr},
    {"device.aperture_um", "micrometers"},
    {"device.order", nullptr},
    {"device.lines", nullptr},
    {"device.pitch_um", "micrometers"},
    {"device.arms", nullptr},
    {"device.delta_length_um", "micrometers"},
    {"grid.start_nm", "nanometers"},
    {"grid.stop_nm", "nanometers"},
    {"grid.points", nullptr},
    {"noise.sigma", nullptr},
    {"input.spectrum", nullptr},
    {"analysis.prominence", nullptr},
    {"analysis.fit_window_fwhm", nullptr},
    {"audit.wavelength_nm", "nanometers"},
    {"simulate.port", nullptr},
    {"fit.port", nullptr},
    {"fit.free", nullptr},
    {"fit.max_iterations", nullptr},
    {"fit.kappa_min", nullptr},
    {"fit.kappa_max", nullptr},
    {"fit.alpha_db_per_cm_min", "dB per centimeter"},
    {"fit.alpha_db_per_cm_max", "dB per centimeter"},
    {"fit.n_eff_min", nullptr},
    {"fit.n_eff_max", nullptr},
    {"fit.radius_um_min", "micrometers"},
    {"fit.radius_um_max", "micrometers"},
    {"output.spectrum", nullptr},
    {"output.report", nullptr},
    {"output.features", nullptr},
    {"output.model", nullptr},
    {"output.residual", nullptr},
    {"output.table", nullptr},
    {"sweep.parameter", nullptr},
    {"sweep.start", nullptr},
    {"sweep.stop", nullptr},
    {"sweep.points", nullptr},
};

bool is_known_key(const std::string& key) {
  for (const KnownKey& k : kKnownKeys) {
    if (key == k.key) return true;
  }
  return false;
}

// "fit.radius_um_min" -> "fit.radius" (range suffix, then unit suffix).
std::string unit_stem(std::string key) {
  auto strip = [&](const char* suffix) {
    const std::string s(suffix);
    if (key.size() > s.size() &&
        key.compare(key.size() - s.size(), s.size(), s) == 0) {
      key.erase(key.size() - s.size());
      return true;
    }
    return false;
  };
  strip("_min") || strip("_max");
  strip("_db_per_cm") || strip("_per_m") || strip("_db") || strip("_nm") ||
      strip("_um") || strip("_pm") || strip("_mm") || strip("_m");
  return key;
}

[[noreturn]] void fail_unknown(const std::string& key, std::size_t line) {
  const std::string stem = unit_stem(key);
  for (const KnownKey& k : kKnownKeys) {
    if (unit_stem(k.key) == stem && key != k.key) {
      std::string hint = std::string("unknown key '") + key +
                         "'; did you mean '" + k.key + "'";
      if (k.unit != nullptr) hint += std::string(" (") + k.unit + ")";
      fail(line, hint + "?");
    }
  }
  fail(line, "unknown key '" + key + "'");
}

EntryMap tokenize(const std::string& text) {
  EntryMap entries;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      fail(line_no, "expected 'key = value'");
    }
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) fail(line_no, "missing key before '='");
    if (value.empty()) fail(line_no, "missing value for '" + key + "'");
    const auto [it, inserted] = entries.emplace(key, Entry{value, line_no});
    if (!inserted) {
      fail(line_no, "duplicate key '" + key + "' (first set on line " +
                        std::to_string(it->second.line) + ")");
    }
  }
  return entries;
}

class Reader {
 public:
  explicit Reader(EntryMap& entries) : entries_(entries) {}

  const Entry* take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.consumed = true;
    return &it->second;
  }

  bool has(const std::string& key) const {
    return entries_.find(key) != entries_.end();
  }

  bool any_with_prefix(const std::string& prefix, std::size_t& line) const {
    for (const auto& [key, entry] : entries_) {
      if (key.rfind(prefix, 0) == 0) {
        line = entry.line;
        return true;
      }
    }
    return false;
  }

  double number(const std::string& key) {
    const Entry* entry = take(key);
    return parse_number(key, *entry);
  }

  std::optional<double> optional_number(const std::string& key) {
    const Entry* entry = take(key);
    if (entry == nullptr) return std::nullopt;
    return parse_number(key, *entry);
  }

  std::optional<long long> optional_integer(const std::string& key) {
    const Entry* entry = take(key);
    if (entry == nullptr) return std::nullopt;
    long long value = 0;
    const char* first = entry->value.data();
    const char* last = first + entry->value.size();
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last) {
      fail(entry->line, "'" + key + "' expects an integer, got '" +
                            entry->value + "'");
    }
    return value;
  }

  void finish() const {
    const Entry* leftover = nullptr;
    std::string leftover_key;
    for (const auto& [key, entry] : entries_) {
      if (entry.consumed) continue;
      if (leftover == nullptr || entry.line < leftover->line) {
        leftover = &entry;
        leftover_key = key;
      }
    }
    if (leftover == nullptr) return;
    if (is_known_key(leftover_key)) {
      fail(leftover->line,
           "key '" + leftover_key + "' does not apply to this configuration");
    }
    fail_unknown(leftover_key, leftover->line);
  }

 private:
  static double parse_number(const std::string& key, const Entry& entry) {
    double value = 0.0;
    const char* first = entry.value.data();
    const char* last = first + entry.value.size();
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last ||
        !std::isfinite(value)) {
      fail(entry.line,
           "'" + key + "' expects a number, got '" + entry.value + "'");
    }
    return value;
  }

  EntryMap& entries_;
};

void note_default(RunConfig& config, const std::string& text) {
  config.defaults_applied.push_back(text + " (default)");
}

RingPort parse_port(const Entry& entry, const std::string& key) {
  if (entry.value == "through") return RingPort::through;
  if (entry.value == "drop") return RingPort::drop;
  fail(entry.line, "'" + key + "' must be 'through' or 'drop', got '" +
                       entry.value + "'");
}

std::vector<RingParameter> parse_free_list(const Entry& entry) {
  std::vector<RingParameter> out;
  std::string item;
  std::istringstream in(entry.value);
  while (std::getline(in, item, ',')) {
    const std::string name = trim(item);
    if (name == "kappa") {
      out.push_back(RingParameter::kappa);
    } else if (name == "alpha") {
      out.push_back(RingParameter::alpha);
    } else if (name == "n_eff") {
      out.push_back(RingParameter::n_eff);
    } else if (name == "radius") {
      out.push_back(RingParameter::radius);
    } else {
      fail(entry.line, "'fit.free' entries must come from "
                       "kappa, alpha, n_eff, radius; got '" + name + "'");
    }
  }
  if (out.empty()) fail(entry.line, "'fit.free' lists no parameters");
  return out;
}

DeviceSpec build_device(Reader& reader, RunConfig& config,
                        const Entry& kind_entry) {
  const std::string& kind = kind_entry.value;
  auto required = [&](const std::string& key) {
    if (!reader.has(key)) {
      fail(kind_entry.line,
           "device.kind = " + kind + " requires '" + key + "'");
    }
    return reader.number(key);
  };

  if (kind == "microring") {
    MicroringSpec ring;
    ring.radius_m = required("device.radius_um") * 1e-6;
    ring.n_eff = required("device.n_eff");
    const bool symmetric = reader.has("device.kappa");
    const bool split =
        reader.has("device.kappa1") || reader.has("device.kappa2");
    if (symmetric && split) {
      fail(kind_entry.line,
           "give either device.kappa or device.kappa1/device.kappa2, not both");
    }
    if (symmetric) {
      ring.kappa1 = ring.kappa2 = reader.number("device.kappa");
    } else if (split) {
      ring.kappa1 = required("device.kappa1");
      ring.kappa2 = required("device.kappa2");
    } else {
      fail(kind_entry.line,
           "device.kind = microring requires device.kappa "
           "(or device.kappa1 and device.kappa2)");
    }
    if (const auto alpha = reader.optional_number("device.alpha_db_per_cm")) {
      ring.alpha_per_m = db_per_cm_to_per_m(*alpha);
    } else {
      ring.alpha_per_m = 0.0;
      note_default(config, "device.alpha_db_per_cm = 0");
    }
    if (const auto margin = reader.optional_number("device.margin_um")) {
      ring.margin_m = *margin * 1e-6;
    } else {
      note_default(config, "device.margin_um = 2.5");
    }
    return ring;
  }

  if (kind == "fabry_perot") {
    FabryPerotSpec cavity;
    cavity.refractive_index = required("device.n");
    cavity.length_m = required("device.length_um") * 1e-6;
    cavity.mirror_reflectance = required("device.mirror_reflectance");
    if (const auto aperture = reader.optional_number("device.aperture_um")) {
      cavity.aperture_m = *aperture * 1e-6;
    } else {
      note_default(config, "device.aperture_um = 10");
    }
    return cavity;
  }

  if (kind == "grating") {
    GratingSpec grating;
    const auto order = reader.optional_integer("device.order");
    const auto lines = reader.optional_integer("device.lines");
    if (!order || !lines) {
      fail(kind_entry.line,
           "device.kind = grating requires 'device.order' and 'device.lines'");
    }
    grating.order = static_cast<int>(*order);
    grating.lines = static_cast<int>(*lines);
    if (const auto pitch = reader.optional_number("device.pitch_um")) {
      grating.pitch_m = *pitch * 1e-6;
    }
    if (const auto length = reader.optional_number("device.length_um")) {
      grating.length_m = *length * 1e-6;
    }
    return grating;
  }

  if (kind == "awg") {
    AwgSpec awg;
    const auto arms = reader.optional_integer("device.arms");
    if (!arms) {
      fail(kind_entry.line, "device.kind = awg requires 'device.arms'");
    }
    awg.arms = static_cast<int>(*arms);
    awg.delta_length_m = required("device.delta_length_um") * 1e-6;
    awg.n_eff = required("device.n_eff");
    if (const auto pitch = reader.optional_number("device.pitch_um")) {
      awg.pitch_m = *pitch * 1e-6;
    }
    if (const auto length = reader.optional_number("device.length_um")) {
      awg.length_m = *length * 1e-6;
    }
    return awg;
  }

  fail(kind_entry.line,
       "device.kind must be one of microring, fabry_perot, grating, awg; "
       "got '" + kind + "'");
}

}  // namespace

Command parse_command_name(const std::string& name) {
  if (name == "simulate") return Command::simulate;
  if (name == "analyze") return Command::analyze;
  if (name == "fit") return Command::fit;
  if (name == "audit") return Command::audit;
  if (name == "sweep") return Command::sweep;
  throw std::invalid_argument(
      "command must be one of simulate, analyze, fit, audit, sweep; got '" +
      name + "'");
}

std::string command_name(Command command) {
  switch (command) {
    case Command::simulate: return "simulate";
    case Command::analyze: return "analyze";
    case Command::fit: return "fit";
    case Command::audit: return "audit";
    case Command::sweep: return "sweep";
  }
  return "unknown";
}

double db_per_cm_to_per_m(double db_per_cm) { return db_per_cm * kDbPerCmFactor; }

double per_m_to_db_per_cm(double alpha_per_m) {
  return alpha_per_m / kDbPerCmFactor;
}

RunConfig parse_config_text(const std::string& text) {
  EntryMap entries = tokenize(text);
  Reader reader(entries);
  RunConfig config;

  if (const Entry* entry = reader.take("command")) {
    try {
      config.command = parse_command_name(entry->value);
    } catch (const std::invalid_argument& e) {
      fail(entry->line, e.what());
    }
  }

  if (const Entry* kind = reader.take("device.kind")) {
    DeviceSpec device = build_device(reader, config, *kind);
    try {
      std::visit([](const auto& spec) { spec.validate(); }, device);
    } catch (const std::invalid_argument& e) {
      fail(kind->line, std::string("invalid device: ") + e.what());
    }
    config.device = device;
  } else {
    std::size_t line = 0;
    if (reader.any_with_prefix("device.", line)) {
      fail(line, "device.* keys need 'device.kind'");
    }
  }

  {
    std::size_t line = 0;
    const bool has_grid = reader.any_with_prefix("grid.", line);
    if (has_grid) {
      if (!reader.has("grid.start_nm") || !reader.has("grid.stop_nm")) {
        fail(line, "grid needs both 'grid.start_nm' and 'grid.stop_nm'");
      }
      WavelengthGrid grid;
      const double start_nm = reader.number("grid.start_nm");
      const double stop_nm = reader.number("grid.stop_nm");
      grid.start_m = start_nm * 1e-9;
      grid.stop_m = stop_nm * 1e-9;
      if (const auto points = reader.optional_integer("grid.points")) {
        if (*points < 2) fail(line, "grid.points must be >= 2");
        grid.points = static_cast<std::size_t>(*points);
      } else {
        if (!(stop_nm > start_nm)) {
          fail(line, "grid.stop_nm must exceed grid.start_nm");
        }
        const double n = std::round((stop_nm - start_nm) / kDefaultGridStepNm) + 1.0;
        if (!(n <= static_cast<double>(kMaxGridPoints))) {
          fail(line, "default 0.5 pm step yields too many points; "
                     "set grid.points explicitly");
        }
        grid.points = static_cast<std::size_t>(n);
        note_default(config, "grid.points = " + std::to_string(grid.points) +
                                 " (0.5 pm step)");
      }
      try {
        grid.validate();
      } catch (const std::invalid_argument& e) {
        fail(line, std::string("invalid grid: ") + e.what());
      }
      config.grid = grid;
    }
  }

  if (const Entry* entry = reader.take("input.spectrum")) {
    config.input_spectrum = entry->value;
  }

  if (const auto nm = reader.optional_number("audit.wavelength_nm")) {
    if (!(*nm > 0.0)) fail("audit.wavelength_nm must be positive");
    config.audit_wavelength_m = *nm * 1e-9;
  }

  if (const Entry* entry = reader.take("simulate.port")) {
    config.simulate_port = parse_port(*entry, "simulate.port");
  } else {
    note_default(config, "simulate.port = through");
  }

  if (const Entry* entry = reader.take("analysis.prominence")) {
    double v = 0.0;
    {
      const char* first = entry->value.data();
      const char* last = first + entry->value.size();
      const auto r = std::from_chars(first, last, v);
      if (r.ec != std::errc() || r.ptr != last) {
        fail(entry->line, "'analysis.prominence' expects a number");
      }
    }
    if (!(v > 0.0) || !(v < 1.0)) {
      fail(entry->line, "analysis.prominence must lie in (0, 1)");
    }
    config.analysis.prominence = v;
  } else {
    note_default(config, "analysis.prominence = 0.1");
  }
  if (const auto v = reader.optional_number("analysis.fit_window_fwhm")) {
    if (!(*v > 0.0)) fail("analysis.fit_window_fwhm must be positive");
    config.analysis.fit_window_fwhm = *v;
  } else {
    note_default(config, "analysis.fit_window_fwhm = 3");
  }

  if (const auto sigma = reader.optional_number("noise.sigma")) {
    if (!(*sigma >= 0.0)) fail("noise.sigma must be >= 0");
    config.noise.sigma = *sigma;
  } else {
    note_default(config, "noise.sigma = 0");
  }

  const bool any_fit_bound_key =
      reader.has("fit.kappa_min") || reader.has("fit.kappa_max") ||
      reader.has("fit.alpha_db_per_cm_min") ||
      reader.has("fit.alpha_db_per_cm_max") || reader.has("fit.n_eff_min") ||
      reader.has("fit.n_eff_max") || reader.has("fit.radius_um_min") ||
      reader.has("fit.radius_um_max");
  if (const Entry* entry = reader.take("fit.port")) {
    config.fit.port = parse_port(*entry, "fit.port");
  } else {
    note_default(config, "fit.port = through");
  }
  if (const Entry* entry = reader.take("fit.free")) {
    config.fit.free_parameters = parse_free_list(*entry);
  } else {
    note_default(config, "fit.free = kappa,alpha,n_eff");
  }
  if (const auto iters = reader.optional_integer("fit.max_iterations")) {
    if (*iters < 1) fail("fit.max_iterations must be >= 1");
    config.fit.max_iterations = static_cast<int>(*iters);
  } else {
    note_default(config, "fit.max_iterations = 500");
  }
  if (!any_fit_bound_key) {
    note_default(config,
                 "fit bounds = kappa [1e-6, 0.999], alpha_db_per_cm [0, 434], "
                 "n_eff [1, 5], radius_um [1, 1000]");
  }
  if (const auto v = reader.optional_number("fit.kappa_min")) {
    config.fit.kappa_bounds.lower = *v;
  }
  if (const auto v = reader.optional_number("fit.kappa_max")) {
    config.fit.kappa_bounds.upper = *v;
  }
  if (const auto v = reader.optional_number("fit.alpha_db_per_cm_min")) {
    config.fit.alpha_bounds.lower = db_per_cm_to_per_m(*v);
  }
  if (const auto v = reader.optional_number("fit.alpha_db_per_cm_max")) {
    config.fit.alpha_bounds.upper = db_per_cm_to_per_m(*v);
  }
  if (const auto v = reader.optional_number("fit.n_eff_min")) {
    config.fit.n_eff_bounds.lower = *v;
  }
  if (const auto v = reader.optional_number("fit.n_eff_max")) {
    config.fit.n_eff_bounds.upper = *v;
  }
  if (const auto v = reader.optional_number("fit.radius_um_min")) {
    config.fit.radius_bounds.lower = *v * 1e-6;
  }
  if (const auto v = reader.optional_number("fit.radius_um_max")) {
    config.fit.radius_bounds.upper = *v * 1e-6;
  }

  {
    std::size_t line = 0;
    if (reader.any_with_prefix("sweep.", line)) {
      SweepOptions sweep;
      const Entry* parameter = reader.take("sweep.parameter");
      if (parameter == nullptr) {
        fail(line, "sweep needs 'sweep.parameter'");
      }
      sweep.parameter = parameter->value;
      if (!reader.has("sweep.start") || !reader.has("sweep.stop") ||
          !reader.has("sweep.points")) {
        fail(line, "sweep needs 'sweep.start', 'sweep.stop', 'sweep.points'");
      }
      sweep.start = reader.number("sweep.start");
      sweep.stop = reader.number("sweep.stop");
      const auto points = reader.optional_integer("sweep.points");
      if (*points < 2) fail(line, "sweep.points must be >= 2");
      sweep.points = static_cast<std::size_t>(*points);
      config.sweep = sweep;
    }
  }

  auto output_name = [&](const char* key, std::string& slot) {
    if (const Entry* entry = reader.take(key)) {
      if (entry->value.find("..") != std::string::npos) {
        fail(entry->line, std::string("'") + key + "' must not contain '..'");
      }
      slot = entry->value;
    }
  };
  output_name("output.spectrum", config.output.spectrum);
  output_name("output.report", config.output.report);
  output_name("output.features", config.output.features);
  output_name("output.model", config.output.model);
  output_name("output.residual", config.output.residual);
  output_name("output.table", config.output.table);

  reader.finish();
  return config;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open config file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace wavesel
