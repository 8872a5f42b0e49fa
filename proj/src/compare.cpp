#include "pulsepsd/compare.hpp"

#include "pulsepsd/analytic.hpp"
#include "pulsepsd/error.hpp"
#include "pulsepsd/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pulsepsd {

namespace {

std::string describe(const char* name, const SpectrumGrid& s)
{
    std::ostringstream os;
    os << name << " axis: " << s.size() << " points";
    if (s.size() > 0)
        os << " from " << s.grid[0] << " to " << s.grid[s.size() - 1] << " cycles/sample";
    if (s.size() > 1)
        os << ", first step " << s.grid[1] - s.grid[0];
    return os.str();
}

}  // namespace

SpectrumGrid analytic_reference(const TrainParams& params, std::size_t fft_size, int k_max,
                                const PeakWindows& windows)
{
    params.validate();
    const FrequencyGrid bins = FrequencyGrid::fft_bins(fft_size);
    if (params.variant == Variant::BlankShorten) {
        SpectrumGrid s = psd_blank_shorten(bins, params.t0, params.delta, params.blank_law, 1.0);
        return normalize_second_lobe(s, windows);
    }

    const SpectrumGrid binned = bin_power(continuous_psd_transition(bins, params));
    DiscreteLineSet lines = discrete_lines_transition(k_max, params);
    std::erase_if(lines.lines, [](const DiscreteLine& l) { return l.freq > 0.5; });
    return combine(binned, lines);
}

ComparisonResult compare_spectra(const SpectrumGrid& analytic, const SpectrumGrid& simulated, double t0,
                                 const CompareBand& band)
{
    if (simulated.size() < 2 || analytic.size() == 0)
        throw GridMismatch("cannot compare: " + describe("analytic", analytic) + "; " +
                           describe("simulated", simulated));
    const std::vector<double>& sim_axis = simulated.grid.values();
    const double step = sim_axis[1] - sim_axis[0];

    ComparisonResult result;
    result.points.reserve(analytic.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double f = analytic.grid[i];
        const std::size_t j = nearest_index(sim_axis, f);
        if (std::abs(sim_axis[j] - f) > 1e-6 * step)
            throw GridMismatch("analytic frequency " + format_number(f) + " has no simulated bin; " +
                               describe("analytic", analytic) + "; " + describe("simulated", simulated));

        ComparedPoint pt;
        pt.f = sim_axis[j];
        pt.analytic_db = to_db(analytic.psd[i]);
        pt.simulated_db = to_db(simulated.psd[j]);
        pt.diff_db = pt.analytic_db - pt.simulated_db;

        const double fn = pt.f * t0;
        const double harmonic = std::round(fn) / t0;
        const bool near_null = std::round(fn) >= 1.0 && std::abs(pt.f - harmonic) <= (band.exclude_bins + 1e-6) * step;
        pt.in_statistic = fn > band.fn_lo && fn < band.fn_hi && !near_null;
        if (pt.in_statistic) {
            ++result.n_in_statistic;
            sum += pt.diff_db;
            if (std::abs(pt.diff_db) > result.max_abs_diff_db) {
                result.max_abs_diff_db = std::abs(pt.diff_db);
                result.f_at_max = pt.f;
            }
        }
        result.points.push_back(pt);
    }
    if (result.n_in_statistic > 0)
        result.mean_diff_db = sum / static_cast<double>(result.n_in_statistic);
    return result;
}

double l2_distance(const SpectrumGrid& a, const SpectrumGrid& b, double t0, double fn_lo, double fn_hi)
{
    if (a.size() == 0 || b.size() < 2)
        throw GridMismatch(describe("first", a) + "; " + describe("second", b));
    const std::vector<double>& axis = b.grid.values();
    const double step = axis[1] - axis[0];
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double fn = a.grid[i] * t0;
        if (fn < fn_lo || fn > fn_hi)
            continue;
        const std::size_t j = nearest_index(axis, a.grid[i]);
        if (std::abs(axis[j] - a.grid[i]) > 1e-6 * step)
            throw GridMismatch("frequency " + format_number(a.grid[i]) + " missing from the second spectrum; " +
                               describe("first", a) + "; " + describe("second", b));
        const double d = a.psd[i] - b.psd[j];
        acc += d * d;
        ++n;
    }
    if (n == 0)
        throw InvalidParameter("l2_distance: no points in the band");
    return acc / static_cast<double>(n);
}

}  // namespace pulsepsd
