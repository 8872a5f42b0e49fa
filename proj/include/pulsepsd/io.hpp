#pragma once

#include "pulsepsd/spectrum.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pulsepsd {

inline constexpr double kDbFloor = -300.0;

// 10·log10(x), floored at -300 dB for zero or negative input.
double to_db(double linear);

// Shortest round-trip decimal text for a double ("%.17g").
std::string format_number(double v);

// CSV with header `f_normalized,psd_linear,psd_db,kind` (or `f_hz,...` when
// hz is set; frequencies are then in cycles/sample).
void write_spectrum_csv(std::ostream& os, const SpectrumGrid& spectrum, bool hz = false);

// Lines in the same schema, one row per harmonic, kind = line.
void write_lines_csv(std::ostream& os, const DiscreteLineSet& lines, bool hz = false);

// Reads the spectrum schema back. Normalized axes are converted with t0.
SpectrumGrid read_spectrum_csv(std::istream& is, double t0);

// Minimal polyline chart of psd_db against the output frequency axis.
void write_svg(std::ostream& os, const SpectrumGrid& spectrum, const std::string& title, bool hz = false);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace pulsepsd
