#include "pulsepsd/peaks.hpp"

#include "pulsepsd/analytic.hpp"
#include "pulsepsd/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pulsepsd {

namespace {

constexpr std::size_t kMaxPeakCandidates = 256;

struct PeakLocation {
    std::size_t index = 0;
    std::size_t lobe_first = 0;  // inclusive
    std::size_t lobe_last = 0;   // inclusive
};

std::vector<double> normalized_axis(const SpectrumGrid& s, double t0)
{
    std::vector<double> fn(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        fn[i] = s.grid[i] * t0;
    return fn;
}

void check_coverage(const std::vector<double>& fn, const PeakWindows& w)
{
    const double lo = std::min(w.peak_lo, w.lobe_lo);
    const double hi = std::max(w.peak_hi, w.lobe_hi);
    if (fn.empty() || fn.front() > lo || fn.back() < hi) {
        std::ostringstream os;
        os << "spectrum must cover normalized frequencies [" << lo << ", " << hi << "]";
        throw InvalidParameter(os.str());
    }
    const auto first = std::lower_bound(fn.begin(), fn.end(), lo);
    const auto last = std::upper_bound(fn.begin(), fn.end(), hi);
    const double density = static_cast<double>(last - first) / (hi - lo);
    if (density < w.min_points_per_unit) {
        std::ostringstream os;
        os << "spectrum has " << density << " points per unit f0 in the search windows; need at least "
           << w.min_points_per_unit;
        throw InvalidParameter(os.str());
    }
}

// Walks away from `from` in direction `step` and returns the index of the
// running minimum once the values rise past rise_factor times it.
std::size_t lobe_edge(const std::vector<double>& s, std::size_t from, int step, double rise_factor)
{
    std::size_t argmin = from;
    double running = s[from];
    std::size_t i = from;
    while (true) {
        if (step < 0 && i == 0)
            break;
        if (step > 0 && i + 1 == s.size())
            break;
        i = step < 0 ? i - 1 : i + 1;
        if (s[i] < running) {
            running = s[i];
            argmin = i;
        } else if (s[i] > rise_factor * running) {
            break;
        }
    }
    return argmin;
}

PeakLocation locate_peak(const SpectrumGrid& spectrum, const std::vector<double>& fn, const PeakWindows& w)
{
    const auto first = static_cast<std::size_t>(std::lower_bound(fn.begin(), fn.end(), w.peak_lo) - fn.begin());
    const auto last = static_cast<std::size_t>(std::upper_bound(fn.begin(), fn.end(), w.peak_hi) - fn.begin());
    if (first >= last)
        throw DetectionFailure("peak window is empty");

    const auto& s = spectrum.psd;
    // Candidates are local maxima, tallest first. The clock peak is the first
    // whose lobe closes inside the window and falls to 1/rise_factor of the
    // peak on both sides; bumps on the flanks of neighbouring lobes do neither.
    std::vector<std::size_t> candidates;
    for (std::size_t i = std::max<std::size_t>(first, 1); i + 1 < last; ++i)
        if (s[i] > s[i - 1] && s[i] >= s[i + 1])
            candidates.push_back(i);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t x, std::size_t y) { return s[x] > s[y]; });
    if (candidates.size() > kMaxPeakCandidates)
        candidates.resize(kMaxPeakCandidates);
    for (std::size_t i : candidates) {
        PeakLocation loc;
        loc.index = i;
        loc.lobe_first = lobe_edge(s, i, -1, w.rise_factor);
        loc.lobe_last = lobe_edge(s, i, +1, w.rise_factor);
        const double floor = s[i] / w.rise_factor;
        if (loc.lobe_first > first && loc.lobe_last + 1 < last && s[loc.lobe_first] <= floor &&
            s[loc.lobe_last] <= floor)
            return loc;
    }
    std::ostringstream os;
    os << "no local maximum in [" << w.peak_lo << ", " << w.peak_hi
       << "]·f0 stands out inside the window; no clock peak";
    throw DetectionFailure(os.str());
}

double lobe_max_excluding(const std::vector<double>& s, const std::vector<double>& fn, const PeakWindows& w,
                          std::size_t skip_first, std::size_t skip_last, bool skip)
{
    double best = -1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(fn[i] > w.lobe_lo && fn[i] < w.lobe_hi))
            continue;
        if (skip && i >= skip_first && i <= skip_last)
            continue;
        best = std::max(best, s[i]);
    }
    if (!(best > 0.0))
        throw DetectionFailure("no positive second-lobe value outside the peak lobe");
    return best;
}

double half_crossing(const std::vector<double>& s, const std::vector<double>& fn, std::size_t peak, int step)
{
    const double half = 0.5 * s[peak];
    std::size_t i = peak;
    while (true) {
        if ((step < 0 && i == 0) || (step > 0 && i + 1 == s.size()))
            throw DetectionFailure("half-height crossing of the clock peak is outside the spectrum");
        const std::size_t j = step < 0 ? i - 1 : i + 1;
        if (s[j] <= half) {
            const double t = (half - s[j]) / (s[i] - s[j]);
            return fn[j] + t * (fn[i] - fn[j]);
        }
        i = j;
    }
}

}  // namespace

PeakReport find_clock_peak(const SpectrumGrid& spectrum, double t0, const PeakWindows& windows)
{
    const std::vector<double> fn = normalized_axis(spectrum, t0);
    check_coverage(fn, windows);
    const PeakLocation loc = locate_peak(spectrum, fn, windows);
    const auto& s = spectrum.psd;

    PeakReport r;
    r.center_freq_norm = fn[loc.index];
    r.peak_value = s[loc.index];
    r.second_lobe_max = lobe_max_excluding(s, fn, windows, loc.lobe_first, loc.lobe_last, true);
    r.amplitude_linear = r.peak_value / r.second_lobe_max;
    r.fwhm_norm = half_crossing(s, fn, loc.index, +1) - half_crossing(s, fn, loc.index, -1);
    if (!(r.amplitude_linear > 0.0) || !(r.fwhm_norm > 0.0))
        throw DetectionFailure("degenerate clock peak");
    return r;
}

double second_lobe_max(const SpectrumGrid& spectrum, const PeakWindows& windows)
{
    const std::vector<double> fn = normalized_axis(spectrum, spectrum.t0);
    try {
        const PeakLocation loc = locate_peak(spectrum, fn, windows);
        return lobe_max_excluding(spectrum.psd, fn, windows, loc.lobe_first, loc.lobe_last, true);
    } catch (const DetectionFailure&) {
        return lobe_max_excluding(spectrum.psd, fn, windows, 0, 0, false);
    }
}

SpectrumGrid normalize_second_lobe(const SpectrumGrid& spectrum, const PeakWindows& windows)
{
    const double level = second_lobe_max(spectrum, windows);
    SpectrumGrid out = spectrum;
    for (double& v : out.psd)
        v /= level;
    out.normalization = "second-lobe";
    return out;
}

std::vector<SweepRow> sweep_delta(const TrainParams& base, const std::vector<double>& deltas, PeakSource source,
                                  const std::optional<SimConfig>& sim, const SweepOptions& options)
{
    if (deltas.empty())
        throw InvalidParameter("sweep_delta: no Δ values given");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (deltas[i] < 0.0 || deltas[i] >= base.t0)
            throw InvalidParameter("sweep_delta: every Δ must satisfy 0 <= Δ < t0");
        if (i > 0 && !(deltas[i] > deltas[i - 1]))
            throw InvalidParameter("sweep_delta: Δ values must be strictly increasing");
    }
    if (source == PeakSource::Simulated && !sim)
        throw InvalidParameter("sweep_delta: simulated source needs a SimConfig");

    const FrequencyGrid grid = FrequencyGrid::uniform_normalized(base.t0, 0.5, 2.5, options.points_per_unit);

    std::vector<SweepRow> rows;
    rows.reserve(deltas.size());
    for (double delta : deltas) {
        try {
            SpectrumGrid spectrum;
            if (source == PeakSource::Analytic) {
                spectrum = psd_blank_shorten(grid, base.t0, delta, base.blank_law, 1.0);
            } else {
                if (delta != std::floor(delta))
                    throw InvalidParameter("simulated sweep needs integer Δ (got " + std::to_string(delta) + ")");
                SimConfig cfg = *sim;
                cfg.params.delta = static_cast<int>(delta);
                spectrum = estimate_psd(cfg);
            }
            rows.push_back({delta, find_clock_peak(spectrum, base.t0, options.windows)});
        } catch (const DetectionFailure& e) {
            std::ostringstream os;
            os << "delta=" << delta << ": " << e.what();
            throw DetectionFailure(os.str());
        }
    }
    return rows;
}

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys)
{
    if (xs.size() != ys.size())
        throw InvalidParameter("linear_fit: xs and ys differ in length");
    if (xs.size() < 3)
        throw InvalidParameter("linear_fit: need at least three points");

    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0))
        throw InvalidParameter("linear_fit: xs are all equal");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0.0) {
        fit.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
            ss_res += e * e;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

}  // namespace pulsepsd
