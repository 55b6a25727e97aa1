#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "pumpsep/dispersion.hpp"
#include "pumpsep/errors.hpp"
#include "pumpsep/loop_emulator.hpp"

using namespace pumpsep;

namespace {

constexpr std::uint64_t kTrials = 300'000;

const HistogramResult& default_run()
{
    static const HistogramResult r = run_emulation(LoopConfig{}, default_loop_detector(), kTrials, 7);
    return r;
}

} // namespace

TEST(LoopConfigTest, Defaults)
{
    const LoopConfig cfg;
    EXPECT_DOUBLE_EQ(cfg.trigger_period(), 8e-6);
    EXPECT_NEAR(1.0 - std::exp(-cfg.mean_pairs()), 0.615, 1e-15);
    EXPECT_NEAR(cfg.decay_ratio(), 0.9 * std::pow(10.0, -0.05), 1e-15);
    EXPECT_NEAR(cfg.round_trip_amplitude(1), 0.1 * std::pow(10.0, -0.05), 1e-15);
    EXPECT_NEAR(cfg.round_trip_amplitude(4) / cfg.round_trip_amplitude(3), cfg.decay_ratio(), 1e-14);
    EXPECT_NEAR(cfg.differential_delay,
                30.0 * (group_index(fused_silica(), 775e-9) - group_index(fused_silica(), 1550e-9)) / 2.99792458e8,
                1e-18);
    EXPECT_NEAR(cfg.differential_delay, 0.54e-9, 0.01e-9);
    EXPECT_NO_THROW(cfg.validate());
}

TEST(LoopConfigTest, BinBudget)
{
    LoopConfig cfg;
    cfg.bins = 52;
    try {
        cfg.validate();
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("would not resolve the pulses"), std::string::npos);
    }
    cfg = {};
    cfg.loop_delay = 160e-9;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.differential_delay = 3e-9;
    EXPECT_THROW(cfg.validate(), ConfigError);
    EXPECT_THROW(run_emulation(cfg, default_loop_detector(), 10, 1), ConfigError);
}

TEST(LoopConfigTest, Validation)
{
    LoopConfig cfg;
    cfg.tap_ratio = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg.tap_ratio = 1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.creation_probability = 1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.loop_loss_db = -0.1;
    EXPECT_THROW(cfg.validate(), ConfigError);
    EXPECT_THROW(run_emulation(LoopConfig{}, default_loop_detector(), 0, 1), ConfigError);
}

TEST(Emulation, DeterministicPerSeed)
{
    const LoopConfig cfg;
    const auto a = run_emulation(cfg, default_loop_detector(), 20'000, 42);
    const auto b = run_emulation(cfg, default_loop_detector(), 20'000, 42);
    const auto c = run_emulation(cfg, default_loop_detector(), 20'000, 43);
    EXPECT_EQ(a, b);
    EXPECT_NE(a.counts_signal, c.counts_signal);
}

TEST(Emulation, ParallelMatchesSerial)
{
    const LoopConfig cfg;
    EXPECT_EQ(run_emulation(cfg, default_loop_detector(), 20'000, 5),
              run_emulation_serial(cfg, default_loop_detector(), 20'000, 5));
}

TEST(Emulation, TrialsAreIndependentOfRunLength)
{
    const LoopConfig cfg;
    const auto t = simulate_trial(cfg, default_loop_detector(), 9, 1234);
    const auto again = simulate_trial(cfg, default_loop_detector(), 9, 1234);
    ASSERT_EQ(t.signal.size(), again.signal.size());
    for (std::size_t i = 0; i < t.signal.size(); ++i) EXPECT_EQ(t.signal[i].time, again.signal[i].time);
}

TEST(Emulation, HistogramAccountsForEveryClick)
{
    const HistogramResult& r = default_run();
    const auto total = [](const std::vector<std::uint64_t>& v) { return std::accumulate(v.begin(), v.end(), 0ull); };
    std::uint64_t signal = 0, pump = 0;
    for (const auto& s : r.round_trips) {
        signal += s.clicks_signal;
        pump += s.clicks_pump;
    }
    // the remainder are dark counts: 100 Hz over an 8 us period
    const double dark_expected = 100.0 * 8e-6 * static_cast<double>(kTrials);
    EXPECT_GE(total(r.counts_signal), signal);
    EXPECT_NEAR(static_cast<double>(total(r.counts_signal) - signal), dark_expected, 5.0 * std::sqrt(dark_expected));
    EXPECT_NEAR(static_cast<double>(total(r.counts_pump) - pump), dark_expected, 5.0 * std::sqrt(dark_expected));
    EXPECT_EQ(r.bin_edges.size(), r.counts_signal.size() + 1);
    EXPECT_DOUBLE_EQ(r.bin_edges.back(), 8e-6);
}

TEST(Emulation, GeometricDecay)
{
    const LoopConfig cfg;
    for (Channel ch : {Channel::Signal, Channel::Pump}) {
        const DecayFit fit = fit_decay_ratio(default_run(), ch);
        EXPECT_GE(fit.points, 10);
        EXPECT_LE(std::abs(fit.log_slope - std::log(cfg.decay_ratio())), 3.0 * fit.log_slope_stderr)
            << "ratio " << fit.ratio << " expected " << cfg.decay_ratio();
    }
}

TEST(Emulation, FirstRoundTripIntensity)
{
    const LoopConfig cfg;
    const DetectorSpec det = default_loop_detector();
    const double expected = cfg.mean_pairs() * cfg.round_trip_amplitude(1) * det.efficiency;
    const double p = 1.0 - std::exp(-expected);
    const double se_mu = std::sqrt(p / ((1.0 - p) * kTrials)); // delta method on -ln(1 - p)
    EXPECT_NEAR(estimated_intensities(default_run(), Channel::Signal)[0], expected, 3.0 * se_mu);
}

TEST(Emulation, EnergyAccounting)
{
    const LoopConfig cfg;
    const DetectorSpec det = default_loop_detector();
    const double l = std::pow(10.0, -cfg.loop_loss_db / 10.0);
    const double closed_form = cfg.tap_ratio * l / (1.0 - (1.0 - cfg.tap_ratio) * l);
    ASSERT_LE(closed_form, 1.0);
    // bins beyond the budget carry (decay_ratio)^bins of the total
    const double captured = closed_form * (1.0 - std::pow(cfg.decay_ratio(), cfg.bins));

    const auto mu = estimated_intensities(default_run(), Channel::Signal);
    double sum = 0.0, var = 0.0;
    for (const auto& s : default_run().round_trips) {
        const double p = static_cast<double>(s.clicks_signal) / kTrials;
        sum += mu[static_cast<std::size_t>(s.round_trip - 1)];
        var += p / ((1.0 - p) * kTrials);
    }
    const double scale = cfg.mean_pairs() * det.efficiency;
    EXPECT_NEAR(sum / scale, captured, 3.0 * std::sqrt(var) / scale);
}

TEST(Emulation, CentroidSeparationGrowsLinearly)
{
    const LoopConfig cfg;
    const SlopeFit fit = fit_separation_slope(default_run());
    EXPECT_GE(fit.points, 10);
    EXPECT_LE(std::abs(fit.slope - cfg.differential_delay), 3.0 * fit.standard_error)
        << fit.slope << " vs " << cfg.differential_delay;
}

TEST(Emulation, CentroidsNeedEnoughCounts)
{
    for (const Centroid& c : default_run().centroids()) {
        const auto& s = default_run().round_trips[static_cast<std::size_t>(c.round_trip - 1)];
        EXPECT_GE(s.clicks_signal, kMinCentroidCounts);
        EXPECT_GE(s.clicks_pump, kMinCentroidCounts);
    }
    EXPECT_LT(default_run().centroids().size(), 51u);
}

TEST(Emulation, FirstSeparationAtThreeLoops)
{
    EXPECT_EQ(first_separated_round_trip(default_run(), default_loop_detector()), 3);
}

TEST(Emulation, DoubledDelayHalvesFirstSeparation)
{
    LoopConfig cfg;
    cfg.differential_delay *= 2.0;
    const auto r = run_emulation(cfg, default_loop_detector(), kTrials, 7);
    const int k = first_separated_round_trip(r, default_loop_detector());
    EXPECT_LE(std::abs(k - 3.0 / 2.0), 1.0) << k;
    EXPECT_GE(k, 1);
}

TEST(Emulation, NoDispersionNoSeparation)
{
    LoopConfig cfg;
    cfg.differential_delay = 0.0;
    const auto r = run_emulation(cfg, default_loop_detector(), kTrials, 7);
    for (const Centroid& c : r.centroids())
        EXPECT_LE(std::abs(c.separation), 4.0 * c.separation_stderr) << c.round_trip;
    const SlopeFit fit = fit_separation_slope(r);
    EXPECT_LE(std::abs(fit.slope), 3.0 * fit.standard_error);
    try {
        first_separated_round_trip(r, default_loop_detector());
        FAIL();
    } catch (const ModelError& e) {
        EXPECT_NE(std::string(e.what()).find("not separated"), std::string::npos);
    }
}

TEST(Emulation, TooFewPopulatedRoundTrips)
{
    const auto r = run_emulation(LoopConfig{}, default_loop_detector(), 500, 1);
    EXPECT_THROW(first_separated_round_trip(r, default_loop_detector()), ModelError);
}

TEST(DeadTime, NoTwoClicksCloserThanDeadTime)
{
    LoopConfig cfg;
    cfg.loop_delay = 30e-9;
    cfg.creation_probability = 0.99;
    cfg.tap_ratio = 0.5;
    cfg.loop_loss_db = 0.0;
    cfg.pump_clicks_per_bin_scale = 3.0;
    DetectorSpec det = default_loop_detector();
    det.dark_count_rate = 2e6;

    std::size_t with = 0, without = 0;
    DetectorSpec free = det;
    free.dead_time = 0.0;
    for (std::uint64_t t = 0; t < 2000; ++t) {
        const TrialClicks clicks = simulate_trial(cfg, det, 3, t);
        for (const auto* list : {&clicks.signal, &clicks.pump}) {
            for (std::size_t i = 1; i < list->size(); ++i)
                ASSERT_GE((*list)[i].time - (*list)[i - 1].time, det.dead_time);
            with += list->size();
        }
        const TrialClicks open = simulate_trial(cfg, free, 3, t);
        without += open.signal.size() + open.pump.size();
    }
    EXPECT_LT(with, without);
}
