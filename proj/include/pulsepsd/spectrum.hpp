#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace pulsepsd {

// Strictly increasing, positive frequencies in cycles/sample (Hz at the unit
// sample rate).
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    explicit FrequencyGrid(std::vector<double> values);

    // Uniform grid over normalized frequency (units of f0 = 1/t0). Points sit
    // at (i + 1/2)/points_per_unit above fn_min so that no point lands on an
    // exact harmonic.
    static FrequencyGrid uniform_normalized(double t0, double fn_min, double fn_max,
                                            int points_per_unit);

    // FFT bin centers k/fft_size for k = 1 .. fft_size/2.
    static FrequencyGrid fft_bins(std::size_t fft_size);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    bool empty() const { return values_.empty(); }

private:
    std::vector<double> values_;
};

enum class SpectrumKind { Continuous, Binned, Line, Combined, Simulated };

std::string to_string(SpectrumKind kind);

// PSD values aligned with a frequency grid. Points where a closed form could
// not be evaluated are listed in `skipped` and absent from the grid.
struct SpectrumGrid {
    FrequencyGrid grid;
    std::vector<double> psd;
    SpectrumKind kind = SpectrumKind::Continuous;
    double t0 = 1.0;              // normalizing period, f0 = 1/t0
    std::string normalization;    // free-form tag, echoed in outputs
    std::string params_echo;      // parameter summary, echoed in outputs
    std::vector<double> skipped;  // frequencies dropped by the evaluator
    std::size_t clamped = 0;      // negative round-off values clamped to 0

    std::size_t size() const { return psd.size(); }
    double f_normalized(std::size_t i) const { return grid[i] * t0; }
};

struct DiscreteLine {
    int k = 0;
    double freq = 0.0;  // cycles/sample, = k/t0
    double power = 0.0;
};

struct DiscreteLineSet {
    std::vector<DiscreteLine> lines;
    double t0 = 1.0;
};

// Index of the grid point nearest to f; ties go to the lower frequency.
std::size_t nearest_index(const std::vector<double>& sorted, double f);

}  // namespace pulsepsd
