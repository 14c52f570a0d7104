#pragma once

#include <filesystem>
#include <string>

#include "wpscat/packet.hpp"
#include "wpscat/spectrum.hpp"

namespace wpscat {

enum class Format { Csv, Json };

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

/// Writes to a temporary sibling and renames it over path.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Header "# kind=<kind> key=value ..." then "k,value" for intensities or
/// "k,re,im,abs" for amplitudes.
std::string spectrum_csv(const Spectrum& s);
std::string spectrum_json(const Spectrum& s);
Spectrum parse_spectrum_csv(const std::string& text);

/// Header "# t=<time>" then "x,re,im,abs".
std::string field_csv(const WaveField& f);
std::string field_json(const WaveField& f);
WaveField parse_field_csv(const std::string& text);

/// Writes <stem>.csv or <stem>.json under dir and returns the path.
std::filesystem::path write_spectrum(const std::filesystem::path& dir, const std::string& stem,
                                     const Spectrum& s, Format format);
std::filesystem::path write_field(const std::filesystem::path& dir, const std::string& stem,
                                  const WaveField& f, Format format);

}  // namespace wpscat
