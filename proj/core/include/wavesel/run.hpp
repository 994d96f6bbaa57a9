#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "wavesel/config.hpp"
#include "wavesel/spectrum.hpp"

namespace wavesel {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitBoundViolation = 3;

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 0;
  ReportFormat format = ReportFormat::text;
};

// Adds zero-mean Gaussian noise (standard deviation sigma) to the
// transmission samples and clamps them back into [0, 1]. The generator is
// fully specified by the seed: identical calls give identical samples on
// every platform.
void add_noise(Spectrum& spectrum, double sigma, std::uint64_t seed);

// Executes one command against the configuration: writes output files into
// out_dir (atomically, with a provenance note file for applied defaults),
// streams warnings and notes to `diagnostics`, and returns the process exit
// code (0 success, 2 fit did not converge, 3 audited linewidth below the
// uncertainty floor). Malformed or incomplete configurations throw
// std::invalid_argument / std::runtime_error; callers map those to exit
// code 1.
int run_command(Command command, const RunConfig& config,
                const RunOptions& options, std::ostream& diagnostics);

}  // namespace wavesel
