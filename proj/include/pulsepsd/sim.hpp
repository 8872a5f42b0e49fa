#pragma once

#include "pulsepsd/model.hpp"
#include "pulsepsd/spectrum.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pulsepsd {

enum class LengthPolicy {
    ZeroPad,   // signal must fit in fft_size; zeros appended
    Truncate,  // longer signals are cut to fft_size, shorter ones padded
};

struct SimConfig {
    std::size_t n_symbols = 0;
    std::size_t n_realizations = 1;
    std::size_t fft_size = 8192;
    std::uint64_t seed = 0;
    TrainParams params;
    LengthPolicy policy = LengthPolicy::ZeroPad;
    unsigned threads = 0;  // 0: hardware concurrency, capped by PULSEPSD_THREADS

    // Throws InvalidParameter naming the violated invariant.
    void validate() const;
};

// All fft_size bins of |X_k / L|² after mean removal, L the signal length
// before padding. Used for Parseval checks.
std::vector<double> periodogram_two_sided(std::span<const std::uint8_t> samples, std::size_t fft_size,
                                          LengthPolicy policy = LengthPolicy::ZeroPad);

// One-sided periodogram on bins k/fft_size, k = 1 .. fft_size/2. The mean is
// removed first; values are |X_k / L|²; no window is applied.
SpectrumGrid periodogram(const SampledSignal& signal, std::size_t fft_size,
                         LengthPolicy policy = LengthPolicy::ZeroPad);

// Seed of realization `index`: SplitMix64 finalizer applied to
// seed + (index + 1)·0x9E3779B97F4A7C15. Stable across versions.
std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index);

// Signal of one realization. Transition-stretch uses n_symbols symbols;
// blank-shorten draws max(n_symbols, ceil(fft_size/(t0-Δ))) symbols so the
// realization reaches fft_size samples, then truncates it to exactly fft_size.
SampledSignal realization_signal(const SimConfig& config, std::size_t index);

// Ensemble-averaged periodogram. Realizations are summed in fixed blocks of
// kReductionBlock in index order, so the result is bit-identical for any
// worker count.
SpectrumGrid estimate_psd(const SimConfig& config);

inline constexpr std::size_t kReductionBlock = 8;

// Worker count for `requested` (0 = hardware), capped by PULSEPSD_THREADS.
unsigned resolve_worker_count(unsigned requested);

}  // namespace pulsepsd
