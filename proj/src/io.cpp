#include "pulsepsd/io.hpp"

#include "pulsepsd/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pulsepsd {

double to_db(double linear)
{
    if (!(linear > 0.0))
        return kDbFloor;
    return std::max(kDbFloor, 10.0 * std::log10(linear));
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_spectrum_csv(std::ostream& os, const SpectrumGrid& spectrum, bool hz)
{
    const std::string kind = to_string(spectrum.kind);
    os << (hz ? "f_hz" : "f_normalized") << ",psd_linear,psd_db,kind\n";
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const double f = hz ? spectrum.grid[i] : spectrum.f_normalized(i);
        os << format_number(f) << ',' << format_number(spectrum.psd[i]) << ','
           << format_number(to_db(spectrum.psd[i])) << ',' << kind << '\n';
    }
}

void write_lines_csv(std::ostream& os, const DiscreteLineSet& lines, bool hz)
{
    os << (hz ? "f_hz" : "f_normalized") << ",psd_linear,psd_db,kind\n";
    for (const auto& line : lines.lines) {
        const double f = hz ? line.freq : static_cast<double>(line.k);
        os << format_number(f) << ',' << format_number(line.power) << ',' << format_number(to_db(line.power))
           << ",line\n";
    }
}

SpectrumGrid read_spectrum_csv(std::istream& is, double t0)
{
    std::string header;
    if (!std::getline(is, header))
        throw EmptyInput("spectrum CSV is empty");
    bool hz = false;
    if (header.rfind("f_hz,", 0) == 0)
        hz = true;
    else if (header.rfind("f_normalized,", 0) != 0)
        throw InvalidParameter("unrecognized spectrum CSV header: " + header);

    SpectrumGrid out;
    out.t0 = t0;
    std::vector<double> freqs;
    std::string line;
    std::string kind;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream row(line);
        std::string f, lin, db;
        std::getline(row, f, ',');
        std::getline(row, lin, ',');
        std::getline(row, db, ',');
        std::getline(row, kind, ',');
        const double fv = std::stod(f);
        freqs.push_back(hz ? fv : fv / t0);
        out.psd.push_back(std::stod(lin));
    }
    static const std::pair<const char*, SpectrumKind> kinds[] = {
        {"continuous", SpectrumKind::Continuous}, {"binned", SpectrumKind::Binned},
        {"line", SpectrumKind::Line},             {"combined", SpectrumKind::Combined},
        {"simulated", SpectrumKind::Simulated},
    };
    for (const auto& [name, k] : kinds)
        if (kind == name)
            out.kind = k;
    out.grid = FrequencyGrid(std::move(freqs));
    return out;
}

void write_svg(std::ostream& os, const SpectrumGrid& spectrum, const std::string& title, bool hz)
{
    constexpr double width = 800.0;
    constexpr double height = 400.0;
    constexpr double margin = 40.0;
    if (spectrum.size() == 0)
        throw EmptyInput("cannot plot an empty spectrum");

    std::vector<double> xs(spectrum.size());
    std::vector<double> ys(spectrum.size());
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        xs[i] = hz ? spectrum.grid[i] : spectrum.f_normalized(i);
        ys[i] = to_db(spectrum.psd[i]);
    }
    // Floor the plot 120 dB under the maximum so isolated zeros do not flatten it.
    const double y_max = *std::max_element(ys.begin(), ys.end());
    double y_min = std::max(*std::min_element(ys.begin(), ys.end()), y_max - 120.0);
    if (y_max - y_min < 1e-12)
        y_min = y_max - 1.0;
    const double x_min = xs.front();
    const double x_max = xs.back() > x_min ? xs.back() : x_min + 1.0;

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << margin << "\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
    os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double y = std::max(ys[i], y_min);
        const double px = margin + (xs[i] - x_min) / (x_max - x_min) * (width - 2 * margin);
        const double py = height - margin - (y - y_min) / (y_max - y_min) * (height - 2 * margin);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px, py);
        os << buf;
    }
    os << "\"/>\n";
    os << "<text x=\"" << margin << "\" y=\"" << height - 10 << "\" font-size=\"12\">"
       << (hz ? "frequency (cycles/sample)" : "frequency normalized to f0") << ", " << format_number(x_min)
       << " .. " << format_number(x_max) << "; PSD " << format_number(y_min) << " .. " << format_number(y_max)
       << " dB</text>\n";
    os << "</svg>\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open " + path.string() + " for writing");
    f << content;
    if (!f)
        throw Error("failed writing " + path.string());
}

}  // namespace pulsepsd
