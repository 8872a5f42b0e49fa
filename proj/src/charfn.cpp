#include "pulsepsd/charfn.hpp"

#include "pulsepsd/error.hpp"

#include <cmath>
#include <numbers>

namespace pulsepsd {

namespace {

Complex cis(double x) { return {std::cos(x), std::sin(x)}; }

void require_transition(const TrainParams& params, const char* who)
{
    params.validate();
    if (params.variant != Variant::TransitionStretch)
        throw InvalidParameter(std::string(who) + " requires the transition-stretch variant");
}

}  // namespace

Complex theta1(double omega, const TrainParams& params)
{
    require_transition(params, "theta1");
    const double p = params.prob_one;
    const Complex z = cis(omega * params.t0);
    return params.prob_zero() * cis(omega * params.delta) * z / (1.0 - p * z);
}

Complex theta1_conj(double omega, const TrainParams& params)
{
    require_transition(params, "theta1_conj");
    const double p = params.prob_one;
    const Complex zc = cis(-omega * params.t0);
    return params.prob_zero() * cis(-omega * params.delta) * zc / (1.0 - p * zc);
}

Complex theta2(double omega, const TrainParams& params)
{
    require_transition(params, "theta2");
    const double q = params.prob_zero();
    const Complex z = cis(omega * params.t0);
    return params.prob_one * cis(-omega * params.delta) * z / (1.0 - q * z);
}

Complex theta_blank(double omega, double t0, double delta, BlankLaw law)
{
    if (!std::isfinite(omega))
        throw EvaluationError("theta_blank: non-finite frequency", omega);

    const Complex z = cis(omega * t0);
    if (law == BlankLaw::PaperKDelta) {
        // e^{jωT0}/2 - e^{jω(2T0-Δ)} / (2 (e^{jωT0} - 2 e^{jωΔ}))
        const Complex den = 2.0 * (z - 2.0 * cis(omega * delta));
        if (std::abs(den) < 1e-12)
            throw EvaluationError("theta_blank: near-singular denominator", omega);
        return z / 2.0 - cis(omega * (2.0 * t0 - delta)) / den;
    }

    // e^{jωΔ} Σ_{k>=1} u^k with u = e^{jω(T0-Δ)}/2
    const Complex u = cis(omega * (t0 - delta)) / 2.0;
    const Complex den = 1.0 - u;
    if (std::abs(den) < 1e-12)
        throw EvaluationError("theta_blank: near-singular denominator", omega);
    return cis(omega * delta) * u / den;
}

std::vector<HarmonicDiscreteness> discrete_component_detector(const TrainParams& params, int k_max,
                                                              double tol)
{
    require_transition(params, "discrete_component_detector");
    if (k_max <= 0)
        throw InvalidParameter("discrete_component_detector: k_max must be positive");

    std::vector<HarmonicDiscreteness> out;
    out.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        const double omega_k = 2.0 * std::numbers::pi * k / params.t0;
        const double periodic = std::abs(theta1(omega_k, params) * theta2(omega_k, params));
        const double s = std::sin(std::numbers::pi * k * params.delta / params.t0);
        out.push_back({k, periodic >= 1.0 - tol && s * s > tol});
    }
    return out;
}

}  // namespace pulsepsd
