#pragma once

#include <filesystem>
#include <string>

#include "wavesel/spectrum.hpp"

namespace wavesel {

// On-disk trace format: one header line "wavelength_nm,transmission", then
// one comma-separated row per sample, LF line endings, values formatted to
// 12 significant digits. Wavelengths are strictly ascending, transmissions
// in [0, 1]. Reading and formatting are locale independent.
inline constexpr const char* kSpectrumHeader = "wavelength_nm,transmission";

// 12-significant-digit representation that survives a parse/format cycle.
std::string format_double(double value);

// Throws std::runtime_error with the offending line number on malformed
// content, and on IO failure.
Spectrum read_spectrum_file(const std::filesystem::path& path);

// Validates, then writes atomically (temp file + rename): the target is
// never left half-written.
void write_spectrum_file(const Spectrum& spectrum,
                         const std::filesystem::path& path);

// Atomic whole-file text write used for every generated artifact.
void write_text_file_atomic(const std::filesystem::path& path,
                            const std::string& content);

}  // namespace wavesel
