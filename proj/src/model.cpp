#include "pulsepsd/model.hpp"

#include "pulsepsd/error.hpp"

#include <cmath>

namespace pulsepsd {

std::string to_string(Variant v)
{
    return v == Variant::TransitionStretch ? "transition" : "blank";
}

std::string to_string(BlankLaw law)
{
    return law == BlankLaw::PaperKDelta ? "paper" : "generator";
}

Variant parse_variant(const std::string& s)
{
    if (s == "transition" || s == "transition-stretch")
        return Variant::TransitionStretch;
    if (s == "blank" || s == "blank-shorten")
        return Variant::BlankShorten;
    throw InvalidParameter("unknown model '" + s + "' (expected transition or blank)");
}

BlankLaw parse_blank_law(const std::string& s)
{
    if (s == "paper" || s == "k-delta")
        return BlankLaw::PaperKDelta;
    if (s == "generator" || s == "k-minus-one-delta")
        return BlankLaw::GeneratorKMinusOneDelta;
    throw InvalidParameter("unknown blank law '" + s + "' (expected paper or generator)");
}

TrainParams TrainParams::transition(int t0, int delta, double prob_one)
{
    TrainParams p;
    p.variant = Variant::TransitionStretch;
    p.t0 = t0;
    p.delta = delta;
    p.prob_one = prob_one;
    p.validate();
    return p;
}

TrainParams TrainParams::blank(int t0, int delta, BlankLaw law)
{
    TrainParams p;
    p.variant = Variant::BlankShorten;
    p.t0 = t0;
    p.delta = delta;
    p.prob_one = 0.5;
    p.blank_law = law;
    p.validate();
    return p;
}

void TrainParams::validate() const
{
    if (t0 <= 0)
        throw InvalidParameter("t0 must be a positive sample count (got " + std::to_string(t0) + ")");
    if (delta < 0)
        throw InvalidParameter("delta must be nonnegative (got " + std::to_string(delta) + ")");
    if (delta >= t0)
        throw InvalidParameter("delta < t0 violated (delta=" + std::to_string(delta) +
                               ", t0=" + std::to_string(t0) + ")");
    if (!(prob_one > 0.0 && prob_one < 1.0))
        throw InvalidParameter("prob_one must lie in (0, 1)");
    if (variant == Variant::BlankShorten && prob_one != 0.5 && !allow_unequal_blank)
        throw InvalidParameter("blank-shorten model assumes prob_one = 0.5 (override not set)");
}

BitStream gen_bits(std::size_t n_symbols, double prob_one, std::uint64_t seed)
{
    if (n_symbols == 0)
        throw EmptyInput("gen_bits: n_symbols must be positive");
    if (!(prob_one > 0.0 && prob_one < 1.0))
        throw InvalidParameter("gen_bits: prob_one must lie in (0, 1)");

    BitStream out;
    out.seed = seed;
    out.prob_one = prob_one;
    out.bits.resize(n_symbols);
    std::mt19937_64 engine(seed);
    for (auto& b : out.bits)
        b = uniform_unit(engine) < prob_one ? 1 : 0;
    return out;
}

SampledSignal synth_transition_stretch(const BitStream& bits, const TrainParams& params)
{
    params.validate();
    if (params.variant != Variant::TransitionStretch)
        throw InvalidParameter("synth_transition_stretch requires the transition-stretch variant");

    const auto t0 = static_cast<std::size_t>(params.t0);
    const auto delta = static_cast<std::size_t>(params.delta);
    SampledSignal sig;
    sig.samples.assign(bits.bits.size() * t0, 0);

    std::uint8_t previous = 0;
    auto it = sig.samples.begin();
    for (std::uint8_t b : bits.bits) {
        if (b) {
            std::fill(it, it + t0, 1);
        } else if (previous) {
            std::fill(it, it + delta, 1);
        }
        it += t0;
        previous = b;
    }
    return sig;
}

SampledSignal synth_blank_shorten(const BitStream& bits, const TrainParams& params)
{
    params.validate();
    if (params.variant != Variant::BlankShorten)
        throw InvalidParameter("synth_blank_shorten requires the blank-shorten variant");

    const auto t0 = static_cast<std::size_t>(params.t0);
    const auto zero_len = t0 - static_cast<std::size_t>(params.delta);
    std::size_t ones = 0;
    for (std::uint8_t b : bits.bits)
        ones += b;
    const std::size_t zeros = bits.bits.size() - ones;

    SampledSignal sig;
    sig.samples.reserve(ones * t0 + zeros * zero_len);
    for (std::uint8_t b : bits.bits)
        sig.samples.insert(sig.samples.end(), b ? t0 : zero_len, b);
    return sig;
}

SampledSignal synthesize(const BitStream& bits, const TrainParams& params)
{
    return params.variant == Variant::TransitionStretch ? synth_transition_stretch(bits, params)
                                                        : synth_blank_shorten(bits, params);
}

IntervalStats interval_stats(const TrainParams& params)
{
    params.validate();
    if (params.variant != Variant::TransitionStretch)
        throw InvalidParameter("interval_stats is defined for the transition-stretch variant");

    const double p = params.prob_one;
    const double q = params.prob_zero();
    const double t0 = params.t0;
    const double delta = params.delta;

    IntervalStats s;
    s.mean_tau = t0 / q + delta;
    s.mean_l = t0 / p - delta;
    // Printed closed form reads T0 p(1-p); the sum of the two means is T0/(p q).
    s.mean_g = t0 / (p * q);
    return s;
}

IntervalStats measure_intervals(std::span<const std::uint8_t> samples)
{
    // Each complete interval starts at a front, falls once, and ends at the next front.
    double sum_tau = 0.0;
    double sum_l = 0.0;
    std::size_t count = 0;

    std::size_t front = 0;
    std::size_t fall = 0;
    bool have_front = false;
    bool have_fall = false;
    std::uint8_t previous = 0;

    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::uint8_t s = samples[i] ? 1 : 0;
        if (s && !previous) {
            if (have_front && have_fall) {
                sum_tau += static_cast<double>(fall - front);
                sum_l += static_cast<double>(i - fall);
                ++count;
            }
            front = i;
            have_front = true;
            have_fall = false;
        } else if (!s && previous && have_front) {
            fall = i;
            have_fall = true;
        }
        previous = s;
    }

    if (count == 0)
        throw InsufficientData("measure_intervals: need at least two pulse fronts");

    IntervalStats out;
    out.count = count;
    out.mean_tau = sum_tau / static_cast<double>(count);
    out.mean_l = sum_l / static_cast<double>(count);
    out.mean_g = out.mean_tau + out.mean_l;
    return out;
}

}  // namespace pulsepsd
