#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace pulsepsd {

enum class Variant {
    TransitionStretch,  // a "one" followed by a "zero" is stretched Δ samples into the zero
    BlankShorten,       // every "zero" symbol lasts t0 - Δ samples
};

// Interval law of the blank-shorten model: the front-to-front interval
// spanning k symbols is k*t0 - Δ_k with probability 2^-k.
enum class BlankLaw {
    PaperKDelta,             // Δ_1 = 0, Δ_k = kΔ for k >= 2
    GeneratorKMinusOneDelta  // Δ_k = (k-1)Δ, what the sample-domain generator produces
};

std::string to_string(Variant v);
std::string to_string(BlankLaw law);
Variant parse_variant(const std::string& s);
BlankLaw parse_blank_law(const std::string& s);

// Model parameters. t0 and delta are integer sample counts; q = 1 - prob_one
// is always derived.
struct TrainParams {
    Variant variant = Variant::TransitionStretch;
    int t0 = 64;
    int delta = 0;
    double prob_one = 0.5;
    BlankLaw blank_law = BlankLaw::PaperKDelta;
    // BlankShorten normally requires prob_one == 0.5; set to lift that.
    bool allow_unequal_blank = false;

    static TrainParams transition(int t0, int delta, double prob_one);
    static TrainParams blank(int t0, int delta, BlankLaw law = BlankLaw::PaperKDelta);

    double prob_zero() const { return 1.0 - prob_one; }

    // Throws InvalidParameter naming the violated invariant.
    void validate() const;
};

struct BitStream {
    std::vector<std::uint8_t> bits;
    std::uint64_t seed = 0;
    double prob_one = 0.5;
};

// One realization at 1 sample per unit time. Levels are exactly 0 or 1.
struct SampledSignal {
    std::vector<std::uint8_t> samples;

    std::size_t size() const { return samples.size(); }
};

struct IntervalStats {
    double mean_tau = 0.0;  // pulse duration
    double mean_l = 0.0;    // gap between pulses
    double mean_g = 0.0;    // front-to-front distance, = mean_tau + mean_l
    std::size_t count = 0;  // number of complete front-to-front intervals (measured only)
};

// Draws one uniform double in [0, 1) from the top 53 bits of the engine.
// mt19937_64 output is fixed by the standard, so bit streams are portable.
inline double uniform_unit(std::mt19937_64& engine)
{
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

BitStream gen_bits(std::size_t n_symbols, double prob_one, std::uint64_t seed);

SampledSignal synth_transition_stretch(const BitStream& bits, const TrainParams& params);
SampledSignal synth_blank_shorten(const BitStream& bits, const TrainParams& params);

// Dispatches on params.variant.
SampledSignal synthesize(const BitStream& bits, const TrainParams& params);

// Closed-form means of pulse duration, gap and front-to-front distance for
// the transition-stretch model.
IntervalStats interval_stats(const TrainParams& params);

// Empirical means over complete front-to-front intervals. A signal starting
// with a one counts as a front at sample 0 (the preceding symbol is zero).
IntervalStats measure_intervals(std::span<const std::uint8_t> samples);
inline IntervalStats measure_intervals(const SampledSignal& signal)
{
    return measure_intervals(std::span<const std::uint8_t>(signal.samples));
}

}  // namespace pulsepsd
