#pragma once

#include "pulsepsd/model.hpp"
#include "pulsepsd/peaks.hpp"
#include "pulsepsd/spectrum.hpp"

#include <cstddef>
#include <vector>

namespace pulsepsd {

// Analytic counterpart of an averaged periodogram on the FFT bins of
// fft_size. Transition-stretch: continuous density binned per bin plus the
// clock lines k = 1..k_max that fall below Nyquist. Blank-shorten: the
// density normalized to its second lobe.
SpectrumGrid analytic_reference(const TrainParams& params, std::size_t fft_size, int k_max = 40,
                                const PeakWindows& windows = {});

struct CompareBand {
    double fn_lo = 0.1;         // normalized, exclusive
    double fn_hi = 10.0;        // normalized, exclusive
    double exclude_bins = 2.0;  // bins on each side of every clock harmonic left out of the statistic
};

struct ComparedPoint {
    double f = 0.0;  // cycles/sample
    double analytic_db = 0.0;
    double simulated_db = 0.0;
    double diff_db = 0.0;  // analytic - simulated
    bool in_statistic = false;
};

struct ComparisonResult {
    std::vector<ComparedPoint> points;
    double max_abs_diff_db = 0.0;
    double mean_diff_db = 0.0;
    double f_at_max = 0.0;  // cycles/sample
    std::size_t n_in_statistic = 0;
};

// Joins two spectra point by point. Every analytic frequency must match a
// simulated bin within 1e-6 of the bin step; otherwise GridMismatch is thrown
// describing both axes. The band statistic runs over joined points.
ComparisonResult compare_spectra(const SpectrumGrid& analytic, const SpectrumGrid& simulated, double t0,
                                 const CompareBand& band = {});

// Mean squared difference of two second-lobe-normalized spectra over
// normalized frequencies [fn_lo, fn_hi]. Every point of `a` in the band must
// exist on the axis of `b`; `b` may carry extra points.
double l2_distance(const SpectrumGrid& a, const SpectrumGrid& b, double t0, double fn_lo, double fn_hi);

}  // namespace pulsepsd
