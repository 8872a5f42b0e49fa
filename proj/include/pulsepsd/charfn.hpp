#pragma once

#include "pulsepsd/model.hpp"

#include <complex>
#include <vector>

namespace pulsepsd {

using Complex = std::complex<double>;

// Characteristic functions of the renewal intervals. Frequencies are angular,
// in rad/sample.

// Pulse duration: P(τ = i*t0 + Δ) = q p^(i-1).
Complex theta1(double omega, const TrainParams& params);

// Same law with e^{-jωτ}; equals conj(theta1).
Complex theta1_conj(double omega, const TrainParams& params);

// Gap between pulses: P(l = i*t0 - Δ) = p q^(i-1).
Complex theta2(double omega, const TrainParams& params);

// Front-to-front interval of the blank-shorten model,
// Σ_k e^{jω(k t0 - Δ_k)} / 2^k in closed form.
// Throws EvaluationError when ω is not finite or the closed form's
// denominator falls below 1e-12 in magnitude.
Complex theta_blank(double omega, double t0, double delta, BlankLaw law);

struct HarmonicDiscreteness {
    int k = 0;
    bool exists = false;
};

inline constexpr double kDetectorTolerance = 1e-9;

// Line at ω_k = 2πk/t0 exists iff |Θ1Θ2(ω_k)| >= 1 - tol (the interval law is
// periodic there) and the pulse factor sin²(πkΔ/t0) exceeds tol.
std::vector<HarmonicDiscreteness> discrete_component_detector(const TrainParams& params, int k_max,
                                                              double tol = kDetectorTolerance);

}  // namespace pulsepsd
