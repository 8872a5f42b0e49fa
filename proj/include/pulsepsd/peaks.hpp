#pragma once

#include "pulsepsd/model.hpp"
#include "pulsepsd/sim.hpp"
#include "pulsepsd/spectrum.hpp"

#include <optional>
#include <vector>

namespace pulsepsd {

// Search windows in units of f0 = 1/t0.
struct PeakWindows {
    double peak_lo = 0.8;
    double peak_hi = 1.3;
    double lobe_lo = 1.0;
    double lobe_hi = 2.0;
    // A lobe ends at the running minimum once the spectrum climbs back above
    // rise_factor times that minimum.
    double rise_factor = 2.0;
    // Minimum grid density inside the windows, points per unit of f0.
    double min_points_per_unit = 50.0;
};

struct PeakReport {
    double center_freq_norm = 0.0;
    double amplitude_linear = 0.0;  // peak / second-lobe maximum
    double fwhm_norm = 0.0;
    double second_lobe_max = 0.0;   // before normalization
    double peak_value = 0.0;        // before normalization
};

// Locates the clock peak in [peak_lo, peak_hi]·f0 and normalizes it by the
// largest value in (lobe_lo, lobe_hi)·f0 outside the peak's own lobe. A lobe
// runs from a local maximum out to the running minimum on each side, ending
// where the spectrum climbs past rise_factor times that minimum. The clock
// peak is the tallest local maximum whose lobe closes strictly inside the
// peak window with both minima at or below peak/rise_factor. FWHM is measured at half the linear peak height by linear
// interpolation. Throws DetectionFailure when no such maximum exists or a
// half-height crossing is missing.
PeakReport find_clock_peak(const SpectrumGrid& spectrum, double t0, const PeakWindows& windows = {});

// Reference level for second-lobe normalization. Excludes the clock-peak lobe
// when a peak is detected, otherwise the plain maximum over the lobe window.
double second_lobe_max(const SpectrumGrid& spectrum, const PeakWindows& windows = {});

SpectrumGrid normalize_second_lobe(const SpectrumGrid& spectrum, const PeakWindows& windows = {});

enum class PeakSource { Analytic, Simulated };

struct SweepOptions {
    PeakWindows windows;
    int points_per_unit = 100000;  // analytic grid over (0.5, 2.5)·f0
};

struct SweepRow {
    double delta = 0.0;
    PeakReport report;
};

// One report per Δ for the blank-shorten model. `base` supplies t0 and the
// interval law; the simulated source takes everything else from `sim` and
// overrides only Δ, keeping seeds identical across the sweep.
std::vector<SweepRow> sweep_delta(const TrainParams& base, const std::vector<double>& deltas,
                                  PeakSource source, const std::optional<SimConfig>& sim = std::nullopt,
                                  const SweepOptions& options = {});

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares. Zero total variance in ys yields r_squared = 1.
LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace pulsepsd
