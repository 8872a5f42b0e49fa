#include "oracles.hpp"

#include <doctest.h>

#include "pulsepsd/error.hpp"
#include "pulsepsd/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace pulsepsd;

namespace {

std::vector<std::uint8_t> levels(std::initializer_list<int> v)
{
    return {v.begin(), v.end()};
}

BitStream bits_of(std::initializer_list<int> v)
{
    BitStream b;
    b.bits.assign(v.begin(), v.end());
    return b;
}

// Lengths of maximal runs of ones, and whether each run touches the end.
std::vector<std::pair<std::size_t, bool>> one_runs(const std::vector<std::uint8_t>& s)
{
    std::vector<std::pair<std::size_t, bool>> runs;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!s[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && s[j])
            ++j;
        runs.emplace_back(j - i, j == s.size());
        i = j;
    }
    return runs;
}

}  // namespace

TEST_CASE("TrainParams validation names the violated invariant")
{
    CHECK_THROWS_WITH_AS(TrainParams::transition(64, 64, 0.5), doctest::Contains("delta < t0"), InvalidParameter);
    CHECK_THROWS_AS(TrainParams::transition(0, 0, 0.5), InvalidParameter);
    CHECK_THROWS_AS(TrainParams::transition(64, -1, 0.5), InvalidParameter);
    CHECK_THROWS_AS(TrainParams::transition(64, 3, 1.0), InvalidParameter);
    CHECK_THROWS_AS(TrainParams::transition(64, 3, 0.0), InvalidParameter);

    TrainParams b = TrainParams::blank(100, 10);
    b.prob_one = 0.6;
    CHECK_THROWS_WITH_AS(b.validate(), doctest::Contains("0.5"), InvalidParameter);
    b.allow_unequal_blank = true;
    CHECK_NOTHROW(b.validate());
}

TEST_CASE("gen_bits")
{
    SUBCASE("near-certain ones")
    {
        const auto b = gen_bits(4, 1.0 - 1e-15, 123);
        CHECK(b.bits == levels({1, 1, 1, 1}));
    }
    SUBCASE("deterministic for a seed")
    {
        CHECK(gen_bits(8, 0.5, 42).bits == gen_bits(8, 0.5, 42).bits);
        CHECK(gen_bits(64, 0.5, 42).bits != gen_bits(64, 0.5, 43).bits);
    }
    SUBCASE("fraction of ones within the binomial 4-sigma band")
    {
        const auto b = gen_bits(1'000'000, 0.55, 1);
        const double frac = std::accumulate(b.bits.begin(), b.bits.end(), 0.0) / 1e6;
        CHECK(std::abs(frac - 0.55) < 0.002);
    }
    SUBCASE("errors")
    {
        CHECK_THROWS_AS(gen_bits(0, 0.5, 1), EmptyInput);
        CHECK_THROWS_AS(gen_bits(4, 1.5, 1), InvalidParameter);
    }
}

TEST_CASE("synth_transition_stretch")
{
    SUBCASE("one then zero stretches the pulse")
    {
        const auto s = synth_transition_stretch(bits_of({1, 0}), TrainParams::transition(4, 1, 0.5));
        CHECK(s.samples == levels({1, 1, 1, 1, 1, 0, 0, 0}));
    }
    SUBCASE("zeros only")
    {
        const auto s = synth_transition_stretch(bits_of({0, 0}), TrainParams::transition(4, 3, 0.5));
        CHECK(s.samples == levels({0, 0, 0, 0, 0, 0, 0, 0}));
    }
    SUBCASE("two ones then two zeros")
    {
        const auto s = synth_transition_stretch(bits_of({1, 1, 0, 0}), TrainParams::transition(4, 2, 0.5));
        const auto runs = one_runs(s.samples);
        REQUIRE(runs.size() == 1);
        CHECK(runs[0].first == 10);
        CHECK(s.samples.size() == 16);
        CHECK(std::count(s.samples.begin() + 10, s.samples.end(), 0) == 6);
    }
    SUBCASE("wrong variant")
    {
        CHECK_THROWS_AS(synth_transition_stretch(bits_of({1}), TrainParams::blank(4, 1)), InvalidParameter);
    }
}

TEST_CASE("synth_blank_shorten")
{
    const auto p = TrainParams::blank(4, 1);
    CHECK(synth_blank_shorten(bits_of({1, 0, 1}), p).samples == levels({1, 1, 1, 1, 0, 0, 0, 1, 1, 1, 1}));
    CHECK(synth_blank_shorten(bits_of({1, 1}), p).samples == levels({1, 1, 1, 1, 1, 1, 1, 1}));

    SUBCASE("mean front-to-front interval, 1e5 symbols")
    {
        const auto params = TrainParams::blank(100, 10);
        const auto sig = synth_blank_shorten(gen_bits(100'000, 0.5, 5), params);
        // Each "one" symbol opens an interval; their count is the number of
        // high samples over t0.
        const auto ones = static_cast<double>(std::count(sig.samples.begin(), sig.samples.end(), 1)) / 100.0;
        const double mean = static_cast<double>(sig.size()) / ones;
        CHECK(std::abs(mean - 190.0) < 1.0);
    }
}

TEST_CASE("synthesis length laws and run structure over random bits")
{
    oracle::Lcg rng{77};
    for (int trial = 0; trial < 200; ++trial) {
        const int t0 = rng.integer(1, 40);
        const int delta = rng.integer(0, t0 - 1);
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 60));
        const auto bits = gen_bits(n, rng.uniform(0.05, 0.95), static_cast<std::uint64_t>(trial));

        const auto ts = synth_transition_stretch(bits, TrainParams::transition(t0, delta, 0.5));
        REQUIRE(ts.size() == n * static_cast<std::size_t>(t0));
        for (auto [len, at_end] : one_runs(ts.samples)) {
            if (at_end)
                CHECK(len % static_cast<std::size_t>(t0) == 0);
            else
                CHECK(len >= static_cast<std::size_t>(t0 + delta));
            if (!at_end)
                CHECK((len - static_cast<std::size_t>(delta)) % static_cast<std::size_t>(t0) == 0);
        }

        TrainParams bp = TrainParams::blank(t0, delta);
        const auto bs = synth_blank_shorten(bits, bp);
        const auto ones = static_cast<std::size_t>(std::count(bits.bits.begin(), bits.bits.end(), 1));
        CHECK(bs.size() == ones * t0 + (n - ones) * (t0 - delta));

        if (delta == 0)
            CHECK(bs.samples == ts.samples);
    }
}

TEST_CASE("interval_stats closed forms")
{
    auto s = interval_stats(TrainParams::transition(64, 0, 0.5));
    CHECK(s.mean_tau == doctest::Approx(128));
    CHECK(s.mean_l == doctest::Approx(128));
    CHECK(s.mean_g == doctest::Approx(256));

    s = interval_stats(TrainParams::transition(64, 3, 0.55));
    CHECK(s.mean_tau == doctest::Approx(64 / 0.45 + 3));
    CHECK(s.mean_l == doctest::Approx(64 / 0.55 - 3));
    CHECK(s.mean_g == doctest::Approx(258.5858585858).epsilon(1e-9));
    CHECK(s.mean_g == doctest::Approx(s.mean_tau + s.mean_l).epsilon(1e-12));

    CHECK(interval_stats(TrainParams::transition(64, 7, 0.3)).mean_g ==
          doctest::Approx(interval_stats(TrainParams::transition(64, 0, 0.3)).mean_g).epsilon(1e-14));
    CHECK_THROWS_AS(interval_stats(TrainParams::blank(64, 3)), InvalidParameter);
}

TEST_CASE("measure_intervals")
{
    SUBCASE("periodic toy")
    {
        const auto s = measure_intervals(levels({1, 1, 0, 0, 1, 1, 0, 0}));
        CHECK(s.mean_tau == 2);
        CHECK(s.mean_l == 2);
        CHECK(s.mean_g == 4);
    }
    SUBCASE("insufficient fronts")
    {
        CHECK_THROWS_AS(measure_intervals(levels({1, 1, 1, 1})), InsufficientData);
        CHECK_THROWS_AS(measure_intervals(levels({0, 0, 1, 1, 0})), InsufficientData);
    }
    SUBCASE("converges to the closed form within 3 standard errors")
    {
        for (auto [p, delta] : {std::pair{0.55, 3}, std::pair{0.5, 0}, std::pair{0.3, 10}}) {
            const auto params = TrainParams::transition(64, delta, p);
            const auto sig = synth_transition_stretch(gen_bits(100'000, p, 11), params);
            const auto measured = measure_intervals(sig);
            const auto expected = interval_stats(params);

            // Standard error of the mean interval from its geometric variance.
            const double q = 1.0 - p;
            const double var_g = 64.0 * 64.0 * (p / (q * q) + q / (p * p));
            const double se = std::sqrt(var_g / static_cast<double>(measured.count));
            CHECK(std::abs(measured.mean_g - expected.mean_g) < 3.0 * se);
            CHECK(measured.mean_tau == doctest::Approx(expected.mean_tau).epsilon(0.01));
            CHECK(measured.mean_l == doctest::Approx(expected.mean_l).epsilon(0.01));
        }
    }
}

TEST_CASE("synthesis is deterministic for (params, seed)")
{
    const auto p = TrainParams::transition(16, 5, 0.4);
    CHECK(synthesize(gen_bits(1000, 0.4, 9), p).samples == synthesize(gen_bits(1000, 0.4, 9), p).samples);
}
