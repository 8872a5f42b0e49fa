#pragma once

#include "pulsepsd/model.hpp"
#include "pulsepsd/spectrum.hpp"

#include <optional>

namespace pulsepsd {

// Grid points closer than this (cycles/sample) to a clock harmonic k/t0 are
// not evaluated by the transition-stretch continuous density.
inline constexpr double kHarmonicExclusion = 1e-9;

// Skip threshold for |1 - Θ| in the blank-shorten density.
inline constexpr double kSingularThreshold = 1e-9;

// Continuous PSD of the mean-removed transition-stretch train at angular
// frequency omega (rad/sample), one-sided factor-2 convention:
//
//   S_c = 2 / (ω² <G>) · Re[(1 - Θ1)(1 - Θ2) / (1 - Θ1Θ2)],  <G> = t0/(p q).
//
// Evaluated through the reduced form N1·N2/(1 - z) with z = e^{jωt0},
//   N1 = p(1 - z) + q(1 - z e^{jωΔ}),  N2 = q(1 - z) + p(1 - z e^{-jωΔ}),
// where every (1 - e^{jx}) is formed from sines to avoid cancellation at small ω.
// delta may be negative. Throws EvaluationError at exact harmonics.
double transition_continuous_density(double omega, double t0, double delta, double prob_one);

// S_c on a grid. Harmonic-adjacent points are skipped and recorded; tiny
// negative values are clamped to 0 and counted. `scale` multiplies every value
// (0.25 reproduces the older amplitude convention).
SpectrumGrid continuous_psd_transition(const FrequencyGrid& grid, const TrainParams& params,
                                       double scale = 1.0);

// Clock-harmonic line powers, Hz form: (sin(πkΔ/t0) p(1-p) / (kπ))².
DiscreteLineSet discrete_lines_transition(int k_max, const TrainParams& params);

// |F(jω)|² of a unit rectangular pulse: (2 sin(ω w / 2) / ω)², w² at ω = 0.
double rect_pulse_energy_spectrum(double omega, double width);

// Re[(1 + Θ)/(1 - Θ)] for the blank-shorten interval law.
double blank_interval_factor(double omega, double t0, double delta, BlankLaw law);

// S(ω) = K |F(jω)|² Re[(1+Θ)/(1-Θ)] for rectangular pulses of width t0.
// With no k_scale the result is normalized so the second lobe equals 1
// (the grid must then cover the second-lobe window).
SpectrumGrid psd_blank_shorten(const FrequencyGrid& grid, double t0, double delta, BlankLaw law,
                               std::optional<double> k_scale = std::nullopt);

// Power per bin: S(f_k)·(f_k - f_{k-1}) with f_0 = 0. The spacing is taken on
// the nominal axis, i.e. including points the evaluator skipped.
SpectrumGrid bin_power(const SpectrumGrid& spectrum);

// Adds each line's power to the bin nearest its frequency. If the nearest
// point of the nominal axis was skipped by the evaluator, that point is
// restored carrying the line power alone. Throws InvalidParameter listing
// every k outside the grid span.
SpectrumGrid combine(const SpectrumGrid& binned_continuous, const DiscreteLineSet& lines);

}  // namespace pulsepsd
