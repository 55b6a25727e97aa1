#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pumpsep/convolution.hpp"
#include "pumpsep/dispersion.hpp"
#include "pumpsep/temporal.hpp"

namespace pumpsep {

struct ScenarioConfig {
    PlatformSpec platform;
    DetectorSpec detector;
    double pulse_fwhm = 1e-12;
    double pump_photons = 1e9;
    double pair_probability = 0.1;
    WidthConvention width_convention = WidthConvention::Sech2Exact;
    double contamination_threshold = 0.01;
    double max_length = 1e6; // bracketing limit, m
    double kernel_half_width_sigmas = kDefaultKernelHalfWidthSigmas;

    void validate() const;
};

// Scenario for a platform with its tabulated defaults and the given jitter.
ScenarioConfig default_scenario(const PlatformSpec& platform, double jitter_fwhm);

struct WindowReport {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double p_signal = 0.0;
    double p_pump = 0.0;
    double contamination = 0.0;
    double suppression_db = 0.0;
    double filtered_signal_probability = 0.0;
    // Fraction of the jittered signal click density inside [t_lo, t_hi].
    double window_signal_fraction = 0.0;
};

// 10 log10(pump_photons / pair_probability) + 10 log10(p_signal / p_pump):
// equal windowed probabilities map to the nominal pump/signal intensity ratio.
double suppression_db(double p_signal, double p_pump, double pump_photons,
                      double pair_probability);

// Windowed probabilities at one propagation length.
WindowReport evaluate_at_distance(const ScenarioConfig& cfg, double length);

// Full densities behind one evaluation; used for profile output.
struct DistanceProfile {
    PulseSpec signal;
    PulseSpec pump;
    TemporalGrid grid;             // common sampling grid
    SampledDensity signal_jittered; // on the extended grid
    SampledDensity pump_jittered;
    WindowReport report;
};
DistanceProfile profile_at_distance(const ScenarioConfig& cfg, double length);

struct CurvePoint {
    double length = 0.0;
    double filtered_signal_probability = 0.0;
};
std::vector<CurvePoint> filtered_signal_curve(const ScenarioConfig& cfg,
                                              const std::vector<double>& lengths);

struct SeparationResult {
    double distance = 0.0;
    double lower_bound = 0.0;   // largest bracketed length still above threshold
    double bracket_width = 0.0; // (distance - lower_bound) / distance
    // Bracket found by the doubling phase, before bisection.
    double initial_lo = 0.0;
    double initial_hi = 0.0;
    double arrival_separation = 0.0;
    double signal_loss_db = 0.0;
    double pump_loss_db = 0.0;
    WindowReport report;
    int iterations = 0;
};

inline constexpr double kSolverRelativeWidth = 1e-4;

// Exponential bracketing from 1 mm, then bisection to kSolverRelativeWidth.
SeparationResult solve_separation_distance(const ScenarioConfig& cfg);

struct SweepRow {
    double jitter_fwhm = 0.0;
    std::optional<SeparationResult> result;
    std::string error;
};

// One solve per jitter value, rows sorted by jitter. Failed rows carry the
// error message instead of a result.
std::vector<SweepRow> jitter_sweep(const ScenarioConfig& cfg, const std::vector<double>& jitters);

} // namespace pumpsep
