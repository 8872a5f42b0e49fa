#include "pulsepsd/analytic.hpp"

#include "pulsepsd/charfn.hpp"
#include "pulsepsd/error.hpp"
#include "pulsepsd/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace pulsepsd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 1 - e^{jx}, accurate for small x.
Complex one_minus_cis(double x)
{
    const double s = std::sin(0.5 * x);
    return {2.0 * s * s, -std::sin(x)};
}

std::string echo(const TrainParams& p)
{
    std::ostringstream os;
    os << "model=" << to_string(p.variant) << " t0=" << p.t0 << " delta=" << p.delta
       << " p=" << p.prob_one;
    if (p.variant == Variant::BlankShorten)
        os << " law=" << to_string(p.blank_law);
    return os.str();
}

std::vector<double> nominal_axis(const SpectrumGrid& s)
{
    std::vector<double> axis = s.grid.values();
    axis.insert(axis.end(), s.skipped.begin(), s.skipped.end());
    std::sort(axis.begin(), axis.end());
    return axis;
}

}  // namespace

double transition_continuous_density(double omega, double t0, double delta, double prob_one)
{
    const double p = prob_one;
    const double q = 1.0 - p;
    const Complex one_minus_z = one_minus_cis(omega * t0);
    if (std::abs(one_minus_z) < 1e-15 || omega == 0.0)
        throw EvaluationError("continuous density is singular at a clock harmonic", omega);

    const Complex n1 = p * one_minus_z + q * one_minus_cis(omega * (t0 + delta));
    const Complex n2 = q * one_minus_z + p * one_minus_cis(omega * (t0 - delta));
    const double mean_g = t0 / (p * q);
    return 2.0 / (omega * omega * mean_g) * std::real(n1 * n2 / one_minus_z);
}

SpectrumGrid continuous_psd_transition(const FrequencyGrid& grid, const TrainParams& params,
                                       double scale)
{
    params.validate();
    if (params.variant != Variant::TransitionStretch)
        throw InvalidParameter("continuous_psd_transition requires the transition-stretch variant");

    SpectrumGrid out;
    out.kind = SpectrumKind::Continuous;
    out.t0 = params.t0;
    out.normalization = "one-sided factor-2, scale=" + std::to_string(scale);
    out.params_echo = echo(params);

    std::vector<double> freqs;
    freqs.reserve(grid.size());
    out.psd.reserve(grid.size());
    const double t0 = params.t0;
    for (double f : grid.values()) {
        const double k = std::round(f * t0);
        if (k >= 1.0 && std::abs(f - k / t0) < kHarmonicExclusion) {
            out.skipped.push_back(f);
            continue;
        }
        double v = 0.0;
        try {
            v = transition_continuous_density(kTwoPi * f, t0, params.delta, params.prob_one);
        } catch (const EvaluationError&) {
            out.skipped.push_back(f);
            continue;
        }
        if (!std::isfinite(v)) {
            out.skipped.push_back(f);
            continue;
        }
        if (v < 0.0) {
            v = 0.0;
            ++out.clamped;
        }
        freqs.push_back(f);
        out.psd.push_back(scale * v);
    }
    if (freqs.empty())
        throw EvaluationError("no evaluable grid points", 0.0);
    out.grid = FrequencyGrid(std::move(freqs));
    return out;
}

DiscreteLineSet discrete_lines_transition(int k_max, const TrainParams& params)
{
    params.validate();
    if (params.variant != Variant::TransitionStretch)
        throw InvalidParameter("discrete_lines_transition requires the transition-stretch variant");
    if (k_max <= 0)
        throw InvalidParameter("k_max must be positive");

    DiscreteLineSet out;
    out.t0 = params.t0;
    const double pq = params.prob_one * params.prob_zero();
    for (int k = 1; k <= k_max; ++k) {
        // Exact zero when kΔ is a multiple of t0, which sin(π·n) misses by round-off.
        const bool null = (static_cast<long long>(k) * params.delta) % params.t0 == 0;
        const double s = null ? 0.0 : std::sin(std::numbers::pi * k * params.delta / params.t0);
        const double a = s * pq / (k * std::numbers::pi);
        out.lines.push_back({k, static_cast<double>(k) / params.t0, a * a});
    }
    return out;
}

double rect_pulse_energy_spectrum(double omega, double width)
{
    if (omega == 0.0)
        return width * width;
    const double a = 2.0 * std::sin(0.5 * omega * width) / omega;
    return a * a;
}

double blank_interval_factor(double omega, double t0, double delta, BlankLaw law)
{
    const Complex theta = theta_blank(omega, t0, delta, law);
    const Complex den = 1.0 - theta;
    if (std::abs(den) < kSingularThreshold)
        throw EvaluationError("blank-shorten density is singular (Θ = 1)", omega);
    return std::real((1.0 + theta) / den);
}

SpectrumGrid psd_blank_shorten(const FrequencyGrid& grid, double t0, double delta, BlankLaw law,
                               std::optional<double> k_scale)
{
    if (!(t0 > 0.0) || delta < 0.0 || !(delta < t0))
        throw InvalidParameter("psd_blank_shorten needs t0 > 0 and 0 <= delta < t0");

    SpectrumGrid out;
    out.kind = SpectrumKind::Continuous;
    out.t0 = t0;
    {
        std::ostringstream os;
        os << "model=blank t0=" << t0 << " delta=" << delta << " p=0.5 law=" << to_string(law);
        out.params_echo = os.str();
    }

    std::vector<double> freqs;
    freqs.reserve(grid.size());
    out.psd.reserve(grid.size());
    for (double f : grid.values()) {
        const double omega = kTwoPi * f;
        double phi = 0.0;
        try {
            phi = blank_interval_factor(omega, t0, delta, law);
        } catch (const EvaluationError&) {
            out.skipped.push_back(f);
            continue;
        }
        double v = rect_pulse_energy_spectrum(omega, t0) * phi;
        if (!std::isfinite(v)) {
            out.skipped.push_back(f);
            continue;
        }
        if (v < 0.0) {
            v = 0.0;
            ++out.clamped;
        }
        freqs.push_back(f);
        out.psd.push_back(v);
    }
    if (freqs.empty())
        throw EvaluationError("no evaluable grid points", 0.0);
    out.grid = FrequencyGrid(std::move(freqs));

    if (k_scale) {
        for (double& v : out.psd)
            v *= *k_scale;
        out.normalization = "K=" + std::to_string(*k_scale);
    } else {
        const double level = second_lobe_max(out, PeakWindows{});
        for (double& v : out.psd)
            v /= level;
        out.normalization = "second-lobe";
    }
    return out;
}

SpectrumGrid bin_power(const SpectrumGrid& spectrum)
{
    if (spectrum.size() < 2)
        throw InvalidParameter("bin_power needs at least two grid points");

    const std::vector<double> axis = nominal_axis(spectrum);
    SpectrumGrid out = spectrum;
    out.kind = SpectrumKind::Binned;
    out.normalization = spectrum.normalization + ", binned";
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const double f = spectrum.grid[i];
        auto it = std::lower_bound(axis.begin(), axis.end(), f);
        const double previous = (it == axis.begin()) ? 0.0 : *(it - 1);
        out.psd[i] = spectrum.psd[i] * (f - previous);
    }
    return out;
}

SpectrumGrid combine(const SpectrumGrid& binned_continuous, const DiscreteLineSet& lines)
{
    const std::vector<double> axis = nominal_axis(binned_continuous);

    std::vector<int> outside;
    for (const auto& line : lines.lines)
        if (line.freq < axis.front() || line.freq > axis.back())
            outside.push_back(line.k);
    if (!outside.empty()) {
        std::ostringstream os;
        os << "lines outside the grid span [" << axis.front() << ", " << axis.back() << "]: k =";
        for (int k : outside)
            os << ' ' << k;
        throw InvalidParameter(os.str());
    }

    SpectrumGrid out = binned_continuous;
    out.kind = SpectrumKind::Combined;
    const auto& values = binned_continuous.grid.values();
    std::map<double, double> restored;
    for (const auto& line : lines.lines) {
        const double f = axis[nearest_index(axis, line.freq)];
        auto it = std::lower_bound(values.begin(), values.end(), f);
        if (it != values.end() && *it == f)
            out.psd[static_cast<std::size_t>(it - values.begin())] += line.power;
        else
            restored[f] += line.power;
    }

    if (!restored.empty()) {
        std::vector<double> freqs;
        std::vector<double> psd;
        freqs.reserve(values.size() + restored.size());
        psd.reserve(values.size() + restored.size());
        auto r = restored.begin();
        for (std::size_t i = 0; i < values.size(); ++i) {
            for (; r != restored.end() && r->first < values[i]; ++r) {
                freqs.push_back(r->first);
                psd.push_back(r->second);
            }
            freqs.push_back(values[i]);
            psd.push_back(out.psd[i]);
        }
        for (; r != restored.end(); ++r) {
            freqs.push_back(r->first);
            psd.push_back(r->second);
        }
        std::vector<double> still_skipped;
        for (double s : out.skipped)
            if (!restored.count(s))
                still_skipped.push_back(s);
        out.skipped = std::move(still_skipped);
        out.grid = FrequencyGrid(std::move(freqs));
        out.psd = std::move(psd);
    }
    return out;
}

}  // namespace pulsepsd
