#include "wavesel/spectrum_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <system_error>

namespace wavesel {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line,
                       const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " +
                           what);
}

bool parse_field(std::string_view text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto result = std::from_chars(first, last, out);
  return result.ec == std::errc() && result.ptr == last;
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                    std::chars_format::general, 12);
  return std::string(buffer, result.ptr);
}

Spectrum read_spectrum_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) fail(path, 1, "empty file");
  if (line == std::string(kSpectrumHeader) + "\r") {
    fail(path, 1, "CRLF line endings; the format uses LF");
  }
  if (line != kSpectrumHeader) {
    fail(path, 1, std::string("expected header '") + kSpectrumHeader + "'");
  }

  Spectrum out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && in.eof()) break;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      fail(path, line_no, "expected 'wavelength_nm,transmission'");
    }
    double nm = 0.0;
    double t = 0.0;
    if (!parse_field(std::string_view(line).substr(0, comma), nm)) {
      fail(path, line_no, "malformed wavelength value");
    }
    if (!parse_field(std::string_view(line).substr(comma + 1), t)) {
      fail(path, line_no, "malformed transmission value");
    }
    if (!(nm > 0.0)) fail(path, line_no, "wavelength must be positive");
    const double meters = nm * 1e-9;
    if (!out.wavelength_m.empty() && !(meters > out.wavelength_m.back())) {
      fail(path, line_no, "wavelengths must be strictly ascending");
    }
    if (t < -1e-12 || t > 1.0 + 1e-12) {
      fail(path, line_no, "transmission outside [0, 1]");
    }
    out.wavelength_m.push_back(meters);
    out.transmission.push_back(t);
  }
  if (out.wavelength_m.empty()) fail(path, line_no, "no samples");
  return out;
}

void write_spectrum_file(const Spectrum& spectrum,
                         const std::filesystem::path& path) {
  spectrum.validate();
  spectrum.validate_transmission();
  std::string content;
  content.reserve(spectrum.size() * 32 + 32);
  content += kSpectrumHeader;
  content += '\n';
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    content += format_double(spectrum.wavelength_m[i] * 1e9);
    content += ',';
    content += format_double(spectrum.transmission[i]);
    content += '\n';
  }
  write_text_file_atomic(path, content);
}

void write_text_file_atomic(const std::filesystem::path& path,
                            const std::string& content) {
  const std::filesystem::path dir =
      path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  const std::filesystem::path temp =
      dir / (path.filename().string() + ".tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot create " + temp.string());
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(temp, ec);
      throw std::runtime_error("failed writing " + temp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw std::runtime_error("failed to move " + temp.string() + " into place");
  }
}

}  // namespace wavesel
