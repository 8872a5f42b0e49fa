#include "oracles.hpp"

#include <doctest.h>

#include "pulsepsd/analytic.hpp"
#include "pulsepsd/charfn.hpp"
#include "pulsepsd/error.hpp"
#include "pulsepsd/peaks.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>

using namespace pulsepsd;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Fourier coefficient power of the ensemble-mean waveform over one clock
// period, by a midpoint sum. The mean is p everywhere, plus pq over the first
// Δ samples (a one followed by a zero).
double mean_waveform_line(int k, int t0, int delta, double p)
{
    const double q = 1.0 - p;
    const int sub = 4000;
    oracle::C acc = 0.0;
    for (int i = 0; i < t0 * sub; ++i) {
        const double t = (i + 0.5) / sub;
        const double m = p + (t < delta ? p * q : 0.0);
        acc += m * oracle::cis(-2.0 * pi * k * t / t0);
    }
    acc /= static_cast<double>(t0 * sub);
    return std::norm(acc);
}

}  // namespace

TEST_CASE("continuous density equals literal substitution of the interval laws")
{
    oracle::Lcg rng{11};
    for (int trial = 0; trial < 500; ++trial) {
        const int t0 = rng.integer(2, 128);
        const int delta = rng.integer(0, t0 - 1);
        const double p = rng.uniform(0.05, 0.95);
        // Stay away from harmonics where the direct form loses precision.
        double fn = rng.uniform(0.02, 20.0);
        if (std::abs(fn - std::round(fn)) < 0.02)
            fn += 0.05;
        const double w = 2.0 * pi * fn / t0;
        CAPTURE(t0);
        CAPTURE(delta);
        CAPTURE(p);
        CAPTURE(fn);
        const double direct = oracle::transition_density_direct(w, t0, delta, p);
        const double reduced = transition_continuous_density(w, t0, delta, p);
        CHECK(std::abs(reduced - direct) <= 1e-9 * std::max(1.0, std::abs(direct)) + 1e-12);
    }
}

TEST_CASE("delta = 0, p = 1/2 reduces to the NRZ sinc-squared density")
{
    CHECK(transition_continuous_density(pi / 64.0, 64, 0, 0.5) == doctest::Approx(16.0 * 4.0 / (pi * pi)).epsilon(1e-12));
    for (double fn : {0.01, 0.1, 0.5, 0.77, 1.5, 3.25, 9.9, 25.1}) {
        const double f = fn / 64.0;
        CHECK(rel(transition_continuous_density(2 * pi * f, 64, 0, 0.5), oracle::nrz_density(f, 64)) < 1e-12);
    }
}

TEST_CASE("continuous density properties")
{
    oracle::Lcg rng{13};
    for (int trial = 0; trial < 500; ++trial) {
        const int t0 = rng.integer(2, 128);
        const int delta = rng.integer(0, t0 - 1);
        const double p = rng.uniform(0.05, 0.95);
        double fn = rng.uniform(0.001, 30.0);
        if (std::abs(fn - std::round(fn)) < 1e-6)
            fn += 1e-3;
        const double w = 2.0 * pi * fn / t0;
        const double s = transition_continuous_density(w, t0, delta, p);
        CHECK(s >= -1e-12);
        // p <-> q together with Δ <-> -Δ leaves the density unchanged.
        CHECK(std::abs(transition_continuous_density(w, t0, -delta, 1.0 - p) - s) <= 1e-10 * std::max(1.0, s));
    }

    SUBCASE("stable as omega approaches zero")
    {
        const double a = transition_continuous_density(1e-7, 64, 3, 0.55);
        const double b = transition_continuous_density(1e-6, 64, 3, 0.55);
        CHECK(std::isfinite(a));
        CHECK(a > 0.0);
        CHECK(rel(a, b) < 1e-3);
    }
    SUBCASE("singular at an exact harmonic")
    {
        CHECK_THROWS_AS(transition_continuous_density(2 * pi / 64.0, 64, 3, 0.55), EvaluationError);
    }
}

TEST_CASE("continuous_psd_transition on a grid")
{
    const auto params = TrainParams::transition(64, 3, 0.55);
    std::vector<double> f = {0.5 / 64, 1.0 / 64, 1.5 / 64, 2.0 / 64, 2.5 / 64};
    const SpectrumGrid s = continuous_psd_transition(FrequencyGrid(f), params);
    CHECK(s.size() == 3);
    CHECK(s.skipped.size() == 2);
    CHECK(s.kind == SpectrumKind::Continuous);
    CHECK(s.t0 == 64);

    const SpectrumGrid quarter = continuous_psd_transition(FrequencyGrid(f), params, 0.25);
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(quarter.psd[i] == doctest::Approx(0.25 * s.psd[i]).epsilon(1e-15));

    CHECK_THROWS_AS(continuous_psd_transition(FrequencyGrid({1.0 / 64}), params), EvaluationError);
    CHECK_THROWS_AS(continuous_psd_transition(FrequencyGrid(f), TrainParams::blank(64, 3)), InvalidParameter);
}

TEST_CASE("discrete lines")
{
    const auto params = TrainParams::transition(64, 3, 0.55);
    const DiscreteLineSet lines = discrete_lines_transition(40, params);
    REQUIRE(lines.lines.size() == 40);
    CHECK(lines.t0 == 64);
    CHECK(lines.lines[0].power == doctest::Approx(1.3363e-4).epsilon(1e-3));
    CHECK(10.0 * std::log10(lines.lines[0].power) == doctest::Approx(-38.74).epsilon(1e-3));

    SUBCASE("Fourier coefficients of the mean waveform")
    {
        for (auto [t0, delta, p] : {std::tuple{64, 3, 0.55}, std::tuple{16, 5, 0.3}, std::tuple{10, 7, 0.8}}) {
            const auto ls = discrete_lines_transition(6, TrainParams::transition(t0, delta, p));
            for (const auto& l : ls.lines) {
                CAPTURE(t0);
                CAPTURE(l.k);
                CHECK(l.freq == doctest::Approx(static_cast<double>(l.k) / t0));
                CHECK(l.power == doctest::Approx(mean_waveform_line(l.k, t0, delta, p)).epsilon(1e-6));
            }
        }
    }
    SUBCASE("exact zeros")
    {
        for (const auto& l : discrete_lines_transition(10, TrainParams::transition(64, 0, 0.5)).lines)
            CHECK(l.power == 0.0);
        const auto half = discrete_lines_transition(8, TrainParams::transition(64, 32, 0.5));
        for (const auto& l : half.lines)
            if (l.k % 2 == 0)
                CHECK(l.power == 0.0);
    }
    SUBCASE("lines agree with the detector")
    {
        const auto p2 = TrainParams::transition(20, 5, 0.4);
        const auto ls = discrete_lines_transition(20, p2);
        const auto det = discrete_component_detector(p2, 20);
        for (std::size_t i = 0; i < ls.lines.size(); ++i)
            CHECK((ls.lines[i].power > 0.0) == det[i].exists);
    }
    CHECK_THROWS_AS(discrete_lines_transition(0, params), InvalidParameter);
}

TEST_CASE("bin_power and combine")
{
    const auto params = TrainParams::transition(64, 0, 0.5);
    const SpectrumGrid s = continuous_psd_transition(FrequencyGrid::fft_bins(8192), params);
    const SpectrumGrid binned = bin_power(s);
    CHECK(binned.kind == SpectrumKind::Binned);
    // Continuous part integrates to half the variance p(1-p) up to Nyquist tail.
    const double total = std::accumulate(binned.psd.begin(), binned.psd.end(), 0.0);
    CHECK(total == doctest::Approx(0.125).epsilon(0.02));

    SUBCASE("line on a skipped harmonic restores the point")
    {
        const auto p3 = TrainParams::transition(64, 3, 0.55);
        const SpectrumGrid b3 = bin_power(continuous_psd_transition(FrequencyGrid::fft_bins(8192), p3));
        DiscreteLineSet ls = discrete_lines_transition(5, p3);
        const SpectrumGrid c = combine(b3, ls);
        CHECK(c.kind == SpectrumKind::Combined);
        CHECK(c.size() == b3.size() + 5);
        const std::size_t i = nearest_index(c.grid.values(), 1.0 / 64);
        CHECK(c.grid[i] == doctest::Approx(1.0 / 64));
        CHECK(c.psd[i] == doctest::Approx(ls.lines[0].power));
        const double line_total = std::accumulate(ls.lines.begin(), ls.lines.end(), 0.0,
                                                  [](double a, const DiscreteLine& l) { return a + l.power; });
        const double before = std::accumulate(b3.psd.begin(), b3.psd.end(), 0.0);
        const double after = std::accumulate(c.psd.begin(), c.psd.end(), 0.0);
        CHECK(after == doctest::Approx(before + line_total).epsilon(1e-12));
    }
    SUBCASE("out-of-span lines are all reported")
    {
        const auto p3 = TrainParams::transition(64, 3, 0.55);
        const SpectrumGrid b3 =
            bin_power(continuous_psd_transition(FrequencyGrid::uniform_normalized(64, 0.5, 1.5, 100), p3));
        try {
            combine(b3, discrete_lines_transition(3, p3));
            FAIL("expected InvalidParameter");
        } catch (const InvalidParameter& e) {
            CHECK(std::string(e.what()).ends_with("k = 2 3"));
        }
    }
}

TEST_CASE("rect pulse and blank interval factor")
{
    CHECK(rect_pulse_energy_spectrum(0.0, 7.0) == 49.0);
    CHECK(rect_pulse_energy_spectrum(2 * pi / 7.0, 7.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rect_pulse_energy_spectrum(0.1, 7.0) ==
          doctest::Approx(std::pow(2 * std::sin(0.35) / 0.1, 2)).epsilon(1e-14));

    oracle::Lcg rng{17};
    for (int trial = 0; trial < 300; ++trial) {
        const int t0 = rng.integer(2, 200);
        const int delta = rng.integer(0, t0 - 1);
        const double w = rng.uniform(1e-3, pi);
        for (BlankLaw law : {BlankLaw::PaperKDelta, BlankLaw::GeneratorKMinusOneDelta}) {
            const Complex th = oracle::theta_blank_series(w, t0, delta, law == BlankLaw::PaperKDelta, 60);
            const double expected = (1.0 - std::norm(th)) / std::norm(1.0 - th);
            const double got = blank_interval_factor(w, t0, delta, law);
            CHECK(got >= 0.0);
            CHECK(got == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("psd_blank_shorten")
{
    const FrequencyGrid grid = FrequencyGrid::uniform_normalized(100, 0.5, 2.5, 2000);
    SUBCASE("second-lobe normalization")
    {
        const SpectrumGrid s = psd_blank_shorten(grid, 100, 10, BlankLaw::GeneratorKMinusOneDelta);
        CHECK(second_lobe_max(s) == doctest::Approx(1.0).epsilon(1e-12));
        const SpectrumGrid raw = psd_blank_shorten(grid, 100, 10, BlankLaw::GeneratorKMinusOneDelta, 1.0);
        const double k = raw.psd[0] / s.psd[0];
        for (std::size_t i = 0; i < s.size(); i += 97)
            CHECK(raw.psd[i] / s.psd[i] == doctest::Approx(k).epsilon(1e-12));
    }
    SUBCASE("laws coincide without shortening")
    {
        const SpectrumGrid a = psd_blank_shorten(grid, 100, 0, BlankLaw::PaperKDelta, 1.0);
        const SpectrumGrid b = psd_blank_shorten(grid, 100, 0, BlankLaw::GeneratorKMinusOneDelta, 1.0);
        for (std::size_t i = 0; i < a.size(); i += 31)
            CHECK(a.psd[i] == doctest::Approx(b.psd[i]).epsilon(1e-12));
    }
    SUBCASE("generator-law peak sits at 2 t0 / (2 t0 - delta)")
    {
        for (int delta : {2, 6, 10}) {
            const SpectrumGrid s = psd_blank_shorten(grid, 100, delta, BlankLaw::GeneratorKMinusOneDelta, 1.0);
            const PeakReport r = find_clock_peak(s, 100);
            CHECK(r.center_freq_norm == doctest::Approx(200.0 / (200.0 - delta)).epsilon(1e-3));
        }
    }
    CHECK_THROWS_AS(psd_blank_shorten(grid, 100, 100, BlankLaw::PaperKDelta), InvalidParameter);
}
