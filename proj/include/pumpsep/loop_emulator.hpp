#pragma once

#include <cstdint>
#include <vector>

#include "pumpsep/temporal.hpp"

namespace pumpsep {

// Monte Carlo emulation of a fiber-loop delay line read out by one SNSPD per
// channel. A 10/90 coupler taps a fraction of the circulating light out on every
// round trip; signal and pump accumulate a differential delay per round trip.

// Pump-minus-signal group delay per round trip of bulk fused silica fiber.
double silica_differential_delay(double fiber_length, double pump_wavelength,
                                 double signal_wavelength);

struct LoopConfig {
    double loop_delay = 156.9e-9;
    // Trigger to first out-coupled signal pulse; keeps round trip 1 clear of
    // the trigger edge so its jittered clicks are not cut off.
    double trigger_delay = 20e-9;
    double rep_rate = 125e3;
    int bins = 51;
    double tap_ratio = 0.1;
    double loop_loss_db = 0.5;
    double differential_delay = silica_differential_delay(30.0, 775e-9, 1550e-9);
    double creation_probability = 0.615;
    // Mean pump photons reaching the detector in the first round trip.
    double pump_clicks_per_bin_scale = 0.5;
    double source_pulse_fwhm = 1e-12;
    double histogram_bin_width = 0.2e-9;

    void validate() const;
    double trigger_period() const { return 1.0 / rep_rate; }
    // Mean pairs per trigger such that P(at least one pair) = creation_probability.
    double mean_pairs() const;
    // Out-coupled amplitude of round trip k >= 1.
    double round_trip_amplitude(int k) const;
    // Amplitude ratio between consecutive round trips.
    double decay_ratio() const;
};

// SNSPD + clock timing model calibrated against the loop measurement.
DetectorSpec default_loop_detector();

enum class Channel : std::uint8_t { Signal = 0, Pump = 1 };

struct Click {
    double time = 0.0; // from the laser trigger
    int round_trip = 0; // 0 for dark counts
};

struct TrialClicks {
    std::vector<Click> signal;
    std::vector<Click> pump;
};

// Clicks of one trigger; depends only on (config, detector, seed, trial).
TrialClicks simulate_trial(const LoopConfig& cfg, const DetectorSpec& detector,
                           std::uint64_t seed, std::uint64_t trial);

struct RoundTripStats {
    int round_trip = 0;
    std::uint64_t clicks_signal = 0;
    std::uint64_t clicks_pump = 0;
    // Click offsets from the nominal signal slot trigger_delay + (k-1) * loop_delay,
    // in integer ps.
    std::int64_t sum_signal = 0;
    std::int64_t sum_pump = 0;
    std::int64_t sumsq_signal = 0;
    std::int64_t sumsq_pump = 0;

    bool operator==(const RoundTripStats&) const = default;
};

struct Centroid {
    int round_trip = 0;
    double t_signal = 0.0;
    double t_pump = 0.0;
    double separation = 0.0;
    double separation_stderr = 0.0;
};

inline constexpr std::uint64_t kMinCentroidCounts = 100;

struct HistogramResult {
    std::vector<double> bin_edges;
    std::vector<std::uint64_t> counts_signal;
    std::vector<std::uint64_t> counts_pump;
    std::uint64_t trials = 0;
    std::vector<RoundTripStats> round_trips; // index k-1
    double loop_delay = 0.0;
    double trigger_delay = 0.0;
    double source_pulse_fwhm = 0.0;

    // Round trips where both channels have at least kMinCentroidCounts clicks.
    std::vector<Centroid> centroids() const;

    bool operator==(const HistogramResult&) const = default;
};

HistogramResult run_emulation(const LoopConfig& cfg, const DetectorSpec& detector,
                              std::uint64_t trials, std::uint64_t seed);

HistogramResult run_emulation_serial(const LoopConfig& cfg, const DetectorSpec& detector,
                                     std::uint64_t trials, std::uint64_t seed);

// Smallest round trip whose centroid separation exceeds three combined
// (jitter, pulse) standard deviations.
int first_separated_round_trip(const HistogramResult& result, const DetectorSpec& detector);

// Per-round-trip mean photon number recovered from click fractions,
// -ln(1 - clicks/trials). Index k-1.
std::vector<double> estimated_intensities(const HistogramResult& result, Channel channel);

struct DecayFit {
    double ratio = 0.0;
    double log_slope = 0.0;
    double log_slope_stderr = 0.0;
    int points = 0;
};

// Weighted log-linear fit of estimated_intensities over populated round trips.
DecayFit fit_decay_ratio(const HistogramResult& result, Channel channel);

struct SlopeFit {
    double slope = 0.0;
    double standard_error = 0.0;
    int points = 0;
};

// Weighted least-squares slope through the origin of centroid separation vs k.
SlopeFit fit_separation_slope(const HistogramResult& result);

} // namespace pumpsep
