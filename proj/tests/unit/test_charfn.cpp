#include "oracles.hpp"

#include <doctest.h>

#include "pulsepsd/charfn.hpp"
#include "pulsepsd/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace pulsepsd;

namespace {

constexpr double pi = std::numbers::pi;

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("theta1 and theta2 match their truncated series")
{
    SUBCASE("reference point")
    {
        const auto params = TrainParams::transition(64, 3, 0.55);
        const double w = pi / 64.0;
        CHECK(rel_err(theta1(w, params), oracle::theta1_series(w, 64, 3, 0.55, 200)) < 1e-12);
        CHECK(rel_err(theta2(w, params), oracle::theta2_series(w, 64, 3, 0.55, 200)) < 1e-12);
    }

    oracle::Lcg rng{3};
    for (int trial = 0; trial < 300; ++trial) {
        const int t0 = rng.integer(2, 200);
        const int delta = rng.integer(0, t0 - 1);
        const double p = rng.uniform(0.05, 0.95);
        const double w = rng.uniform(1e-4, pi);
        const auto params = TrainParams::transition(t0, delta, p);
        const int n = oracle::series_terms(std::max(p, 1.0 - p));
        CAPTURE(t0);
        CAPTURE(delta);
        CAPTURE(p);
        CAPTURE(w);
        CHECK(rel_err(theta1(w, params), oracle::theta1_series(w, t0, delta, p, n)) < 1e-12);
        CHECK(rel_err(theta2(w, params), oracle::theta2_series(w, t0, delta, p, n)) < 1e-12);
        CHECK(std::abs(theta1(w, params)) <= 1.0 + 1e-12);
        CHECK(std::abs(theta2(w, params)) <= 1.0 + 1e-12);
        CHECK(rel_err(theta1_conj(w, params), std::conj(theta1(w, params))) < 1e-15);
    }
}

TEST_CASE("theta_blank matches its truncated series for both laws")
{
    oracle::Lcg rng{5};
    for (int trial = 0; trial < 300; ++trial) {
        const int t0 = rng.integer(2, 200);
        const int delta = rng.integer(0, t0 - 1);
        const double w = rng.uniform(1e-4, pi);
        CAPTURE(t0);
        CAPTURE(delta);
        CAPTURE(w);
        for (BlankLaw law : {BlankLaw::PaperKDelta, BlankLaw::GeneratorKMinusOneDelta}) {
            const Complex ref = oracle::theta_blank_series(w, t0, delta, law == BlankLaw::PaperKDelta, 60);
            CHECK(rel_err(theta_blank(w, t0, delta, law), ref) < 1e-12);
        }
    }
}

TEST_CASE("theta_blank laws agree at delta = 0")
{
    for (double w : {0.01, 0.3, 1.7}) {
        CHECK(rel_err(theta_blank(w, 50, 0, BlankLaw::PaperKDelta),
                      theta_blank(w, 50, 0, BlankLaw::GeneratorKMinusOneDelta)) < 1e-14);
    }
}

TEST_CASE("theta_blank error paths")
{
    CHECK_THROWS_AS(theta_blank(std::numeric_limits<double>::quiet_NaN(), 100, 10, BlankLaw::PaperKDelta),
                    EvaluationError);
    CHECK_THROWS_AS(theta_blank(std::numeric_limits<double>::infinity(), 100, 10, BlankLaw::PaperKDelta),
                    EvaluationError);
    try {
        theta_blank(std::numeric_limits<double>::quiet_NaN(), 100, 10, BlankLaw::PaperKDelta);
    } catch (const EvaluationError& e) {
        CHECK(std::isnan(e.omega()));
    }
}

TEST_CASE("transition characteristic functions reject the blank variant")
{
    CHECK_THROWS_AS(theta1(0.1, TrainParams::blank(64, 3)), InvalidParameter);
    CHECK_THROWS_AS(theta2(0.1, TrainParams::blank(64, 3)), InvalidParameter);
}

TEST_CASE("product of interval laws is unimodular at clock harmonics")
{
    const auto params = TrainParams::transition(64, 3, 0.55);
    for (int k = 1; k <= 10; ++k) {
        const double w = 2.0 * pi * k / 64.0;
        CHECK(std::abs(theta1(w, params) * theta2(w, params)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("discrete_component_detector")
{
    SUBCASE("no lines without stretch")
    {
        for (const auto& h : discrete_component_detector(TrainParams::transition(64, 0, 0.5), 10))
            CHECK_FALSE(h.exists);
    }
    SUBCASE("all lines present for delta = 3")
    {
        const auto hs = discrete_component_detector(TrainParams::transition(64, 3, 0.55), 40);
        REQUIRE(hs.size() == 40);
        for (std::size_t i = 0; i < hs.size(); ++i) {
            CHECK(hs[i].k == static_cast<int>(i) + 1);
            CHECK(hs[i].exists);
        }
    }
    SUBCASE("even lines vanish at delta = t0/2")
    {
        for (const auto& h : discrete_component_detector(TrainParams::transition(64, 32, 0.5), 8))
            CHECK(h.exists == (h.k % 2 == 1));
    }
    SUBCASE("bad k_max")
    {
        CHECK_THROWS_AS(discrete_component_detector(TrainParams::transition(64, 3, 0.5), 0), InvalidParameter);
    }
}
