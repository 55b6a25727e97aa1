#include "pumpsep/loop_emulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pumpsep/dispersion.hpp"
#include "pumpsep/errors.hpp"
#include "pumpsep/units.hpp"

namespace pumpsep {

namespace {

// splitmix64 finalizer; decorrelates per-trial seeds.
std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial)
{
    return mix64(mix64(seed) ^ (trial * 0xD1B54A32D192ED03ULL + 1));
}

double gaussian_sigma(double fwhm) { return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2)); }

double sech2_std(double fwhm)
{
    return std::numbers::pi * sigma_from_fwhm(fwhm, WidthConvention::Sech2Exact) / (2.0 * std::sqrt(3.0));
}

// Per-run constants shared by every trial.
struct TrialPlan {
    std::vector<std::poisson_distribution<int>::param_type> signal_means;
    std::vector<std::poisson_distribution<int>::param_type> pump_means;
    std::vector<double> signal_delay; // per round trip, from the time reference
    std::vector<double> pump_delay;
    std::poisson_distribution<int>::param_type dark_mean;
    bool has_dark = false;
    double pulse_half_sigma = 0.0; // sigma/2 of the sech^2 source pulse
    double jitter_sigma = 0.0;
    double period = 0.0;
    double dead_time = 0.0;
};

TrialPlan make_plan(const LoopConfig& cfg, const DetectorSpec& detector)
{
    TrialPlan plan;
    const double eta = detector.efficiency;
    const double pairs = cfg.mean_pairs();
    const double first = cfg.round_trip_amplitude(1);
    for (int k = 1; k <= cfg.bins; ++k) {
        const double a = cfg.round_trip_amplitude(k);
        plan.signal_means.emplace_back(std::max(pairs * a * eta, 1e-300));
        plan.pump_means.emplace_back(std::max(cfg.pump_clicks_per_bin_scale * (a / first) * eta, 1e-300));
        const double base = cfg.trigger_delay + (k - 1) * cfg.loop_delay;
        plan.signal_delay.push_back(base);
        plan.pump_delay.push_back(base + k * cfg.differential_delay);
    }
    const double dark = detector.dark_count_rate * cfg.trigger_period();
    plan.has_dark = dark > 0.0;
    plan.dark_mean = std::poisson_distribution<int>::param_type(plan.has_dark ? dark : 1.0);
    plan.pulse_half_sigma = 0.5 * sigma_from_fwhm(cfg.source_pulse_fwhm, WidthConvention::Sech2Exact);
    plan.jitter_sigma = gaussian_sigma(detector.jitter_fwhm);
    plan.period = cfg.trigger_period();
    plan.dead_time = detector.dead_time;
    return plan;
}

class TrialRunner {
public:
    explicit TrialRunner(const TrialPlan& plan) : plan_(plan) {}

    void run(std::uint64_t seed, std::uint64_t trial, TrialClicks& out)
    {
        std::mt19937_64 rng(trial_seed(seed, trial));
        std::poisson_distribution<int> poisson;
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        std::normal_distribution<double> normal(0.0, 1.0);

        const auto channel = [&](const auto& means, const auto& delays, std::vector<Click>& clicks) {
            clicks.clear();
            for (std::size_t i = 0; i < means.size(); ++i) {
                const int photons = poisson(rng, means[i]);
                if (photons == 0) continue;
                // The earliest photon of the pulse fires the detector.
                double earliest = HUGE_VAL;
                for (int p = 0; p < photons; ++p) {
                    double u = uniform(rng);
                    while (u == 0.0) u = uniform(rng);
                    earliest = std::min(earliest, plan_.pulse_half_sigma * std::log(u / (1.0 - u)));
                }
                const double t = delays[i] + earliest + plan_.jitter_sigma * normal(rng);
                clicks.push_back({t, static_cast<int>(i) + 1});
            }
            if (plan_.has_dark) {
                const int dark = poisson(rng, plan_.dark_mean);
                for (int d = 0; d < dark; ++d) clicks.push_back({plan_.period * uniform(rng), 0});
            }
            apply_dead_time(clicks);
        };
        channel(plan_.signal_means, plan_.signal_delay, out.signal);
        channel(plan_.pump_means, plan_.pump_delay, out.pump);
    }

private:
    void apply_dead_time(std::vector<Click>& clicks) const
    {
        std::sort(clicks.begin(), clicks.end(),
                  [](const Click& a, const Click& b) { return a.time < b.time; });
        std::size_t kept = 0;
        double last = -HUGE_VAL;
        for (const Click& c : clicks) {
            if (c.time < 0.0 || c.time >= plan_.period) continue;
            if (c.time - last < plan_.dead_time) continue;
            last = c.time;
            clicks[kept++] = c;
        }
        clicks.resize(kept);
    }

    const TrialPlan& plan_;
};

HistogramResult empty_result(const LoopConfig& cfg)
{
    HistogramResult r;
    const double period = cfg.trigger_period();
    const auto nbins = static_cast<std::size_t>(std::ceil(period / cfg.histogram_bin_width));
    r.bin_edges.resize(nbins + 1);
    for (std::size_t i = 0; i <= nbins; ++i) r.bin_edges[i] = static_cast<double>(i) * cfg.histogram_bin_width;
    r.counts_signal.assign(nbins, 0);
    r.counts_pump.assign(nbins, 0);
    r.round_trips.resize(static_cast<std::size_t>(cfg.bins));
    for (int k = 1; k <= cfg.bins; ++k) r.round_trips[static_cast<std::size_t>(k - 1)].round_trip = k;
    r.loop_delay = cfg.loop_delay;
    r.trigger_delay = cfg.trigger_delay;
    r.source_pulse_fwhm = cfg.source_pulse_fwhm;
    return r;
}

void accumulate(HistogramResult& r, const TrialClicks& clicks, double bin_width)
{
    const auto add = [&](const std::vector<Click>& list, std::vector<std::uint64_t>& counts, bool signal) {
        for (const Click& c : list) {
            const auto bin = std::min(static_cast<std::size_t>(c.time / bin_width), counts.size() - 1);
            ++counts[bin];
            if (c.round_trip == 0) continue;
            RoundTripStats& s = r.round_trips[static_cast<std::size_t>(c.round_trip - 1)];
            const auto offset = static_cast<std::int64_t>(
                std::llround((c.time - r.trigger_delay - (c.round_trip - 1) * r.loop_delay) / units::ps));
            if (signal) {
                ++s.clicks_signal;
                s.sum_signal += offset;
                s.sumsq_signal += offset * offset;
            } else {
                ++s.clicks_pump;
                s.sum_pump += offset;
                s.sumsq_pump += offset * offset;
            }
        }
    };
    add(clicks.signal, r.counts_signal, true);
    add(clicks.pump, r.counts_pump, false);
}

void merge(HistogramResult& into, const HistogramResult& from)
{
    for (std::size_t i = 0; i < into.counts_signal.size(); ++i) {
        into.counts_signal[i] += from.counts_signal[i];
        into.counts_pump[i] += from.counts_pump[i];
    }
    for (std::size_t k = 0; k < into.round_trips.size(); ++k) {
        RoundTripStats& a = into.round_trips[k];
        const RoundTripStats& b = from.round_trips[k];
        a.clicks_signal += b.clicks_signal;
        a.clicks_pump += b.clicks_pump;
        a.sum_signal += b.sum_signal;
        a.sum_pump += b.sum_pump;
        a.sumsq_signal += b.sumsq_signal;
        a.sumsq_pump += b.sumsq_pump;
    }
}

struct ChannelMoments {
    double mean = 0.0;     // s
    double variance = 0.0; // s^2
};

ChannelMoments moments_of(std::uint64_t n, std::int64_t sum, std::int64_t sumsq)
{
    const auto nn = static_cast<long double>(n);
    const long double mean = static_cast<long double>(sum) / nn;
    const long double var =
        n > 1 ? (static_cast<long double>(sumsq) - nn * mean * mean) / (nn - 1.0L) : 0.0L;
    return {static_cast<double>(mean) * units::ps,
            static_cast<double>(std::max(var, 0.0L)) * units::ps * units::ps};
}

} // namespace

double silica_differential_delay(double fiber_length, double pump_wavelength, double signal_wavelength)
{
    const SellmeierModel silica = fused_silica();
    return fiber_length * (group_index(silica, pump_wavelength) - group_index(silica, signal_wavelength)) /
           kSpeedOfLight;
}

void LoopConfig::validate() const
{
    if (!(loop_delay > 0.0)) throw ConfigError("loop delay must be > 0");
    if (!(trigger_delay >= 0.0)) throw ConfigError("trigger delay must be >= 0");
    if (!(rep_rate > 0.0)) throw ConfigError("repetition rate must be > 0");
    if (bins < 1) throw ConfigError("bins must be >= 1");
    if (!(tap_ratio > 0.0 && tap_ratio < 1.0)) throw ConfigError("tap ratio must lie in (0, 1)");
    if (!(loop_loss_db >= 0.0)) throw ConfigError("loop loss must be >= 0 dB");
    if (!std::isfinite(differential_delay)) throw ConfigError("differential delay must be finite");
    if (!(creation_probability >= 0.0 && creation_probability < 1.0))
        throw ConfigError("creation probability must lie in [0, 1)");
    if (!(pump_clicks_per_bin_scale >= 0.0)) throw ConfigError("pump click scale must be >= 0");
    if (!(source_pulse_fwhm > 0.0)) throw ConfigError("source pulse FWHM must be > 0");
    if (!(histogram_bin_width > 0.0)) throw ConfigError("histogram bin width must be > 0");
    // Last pulse of the train, including its accumulated differential delay,
    // must arrive before the next trigger.
    const double last = trigger_delay + (bins - 1) * loop_delay + bins * std::abs(differential_delay);
    if (last >= trigger_period())
        throw ConfigError("pulse train of " + std::to_string(bins) + " bins ends at " +
                          format_number(last / units::ns) + " ns, beyond the " +
                          format_number(trigger_period() / units::ns) +
                          " ns trigger period; the detector would not resolve the pulses");
}

double LoopConfig::mean_pairs() const { return -std::log1p(-creation_probability); }

double LoopConfig::round_trip_amplitude(int k) const
{
    return tap_ratio * std::pow(1.0 - tap_ratio, k - 1) * std::pow(10.0, -k * loop_loss_db / 10.0);
}

double LoopConfig::decay_ratio() const { return (1.0 - tap_ratio) * std::pow(10.0, -loop_loss_db / 10.0); }

DetectorSpec default_loop_detector()
{
    DetectorSpec d;
    d.jitter_fwhm = 1.05e-9; // detector + laser clock, calibrated to the loop histogram
    d.efficiency = 0.85;
    d.dead_time = 50e-9;
    d.dark_count_rate = 100.0;
    return d;
}

TrialClicks simulate_trial(const LoopConfig& cfg, const DetectorSpec& detector, std::uint64_t seed,
                           std::uint64_t trial)
{
    cfg.validate();
    detector.validate();
    const TrialPlan plan = make_plan(cfg, detector);
    TrialClicks out;
    TrialRunner(plan).run(seed, trial, out);
    return out;
}

HistogramResult run_emulation_serial(const LoopConfig& cfg, const DetectorSpec& detector,
                                     std::uint64_t trials, std::uint64_t seed)
{
    cfg.validate();
    detector.validate();
    if (trials < 1) throw ConfigError("trials must be >= 1");
    const TrialPlan plan = make_plan(cfg, detector);
    HistogramResult r = empty_result(cfg);
    r.trials = trials;
    TrialRunner runner(plan);
    TrialClicks clicks;
    for (std::uint64_t t = 0; t < trials; ++t) {
        runner.run(seed, t, clicks);
        accumulate(r, clicks, cfg.histogram_bin_width);
    }
    return r;
}

HistogramResult run_emulation(const LoopConfig& cfg, const DetectorSpec& detector, std::uint64_t trials,
                              std::uint64_t seed)
{
    cfg.validate();
    detector.validate();
    if (trials < 1) throw ConfigError("trials must be >= 1");
    const TrialPlan plan = make_plan(cfg, detector);
    HistogramResult total = empty_result(cfg);
    total.trials = trials;

    // Integer accumulators make the reduction independent of thread count and order.
#pragma omp parallel
    {
        HistogramResult local = empty_result(cfg);
        TrialRunner runner(plan);
        TrialClicks clicks;
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
            runner.run(seed, static_cast<std::uint64_t>(t), clicks);
            accumulate(local, clicks, cfg.histogram_bin_width);
        }
#pragma omp critical
        merge(total, local);
    }
    return total;
}

std::vector<Centroid> HistogramResult::centroids() const
{
    std::vector<Centroid> out;
    for (const RoundTripStats& s : round_trips) {
        if (s.clicks_signal < kMinCentroidCounts || s.clicks_pump < kMinCentroidCounts) continue;
        const ChannelMoments sig = moments_of(s.clicks_signal, s.sum_signal, s.sumsq_signal);
        const ChannelMoments pump = moments_of(s.clicks_pump, s.sum_pump, s.sumsq_pump);
        Centroid c;
        c.round_trip = s.round_trip;
        const double base = trigger_delay + (s.round_trip - 1) * loop_delay;
        c.t_signal = base + sig.mean;
        c.t_pump = base + pump.mean;
        c.separation = pump.mean - sig.mean;
        c.separation_stderr = std::sqrt(sig.variance / static_cast<double>(s.clicks_signal) +
                                        pump.variance / static_cast<double>(s.clicks_pump));
        out.push_back(c);
    }
    return out;
}

int first_separated_round_trip(const HistogramResult& result, const DetectorSpec& detector)
{
    const auto centroids = result.centroids();
    if (centroids.size() < 3)
        throw ModelError("need at least 3 populated round trips (>= " + std::to_string(kMinCentroidCounts) +
                         " clicks per channel), found " + std::to_string(centroids.size()));
    const double jitter = gaussian_sigma(detector.jitter_fwhm);
    const double pulse = sech2_std(result.source_pulse_fwhm);
    const double spread = std::sqrt(jitter * jitter + pulse * pulse);
    for (const Centroid& c : centroids)
        if (std::abs(c.separation) > 3.0 * spread) return c.round_trip;
    throw ModelError("not separated within bin budget: no round trip exceeds 3 x " +
                     format_number(spread / units::ns) + " ns");
}

std::vector<double> estimated_intensities(const HistogramResult& result, Channel channel)
{
    std::vector<double> out;
    out.reserve(result.round_trips.size());
    const auto trials = static_cast<double>(result.trials);
    for (const RoundTripStats& s : result.round_trips) {
        const auto n = static_cast<double>(channel == Channel::Signal ? s.clicks_signal : s.clicks_pump);
        out.push_back(-std::log1p(-n / trials));
    }
    return out;
}

DecayFit fit_decay_ratio(const HistogramResult& result, Channel channel)
{
    const auto mu = estimated_intensities(result, channel);
    const auto trials = static_cast<double>(result.trials);
    double sw = 0.0, swx = 0.0, swy = 0.0;
    std::vector<double> xs, ys, ws;
    for (const RoundTripStats& s : result.round_trips) {
        const auto n = channel == Channel::Signal ? s.clicks_signal : s.clicks_pump;
        if (n < kMinCentroidCounts) continue;
        const double p = static_cast<double>(n) / trials;
        const double m = mu[static_cast<std::size_t>(s.round_trip - 1)];
        // delta method: var(ln mu_hat) = p / ((1 - p) N mu^2)
        const double var = p / ((1.0 - p) * trials * m * m);
        xs.push_back(s.round_trip);
        ys.push_back(std::log(m));
        ws.push_back(1.0 / var);
        sw += ws.back();
        swx += ws.back() * xs.back();
        swy += ws.back() * ys.back();
    }
    if (xs.size() < 2) throw ModelError("decay fit needs at least 2 populated round trips");
    const double xbar = swx / sw, ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
        sxy += ws[i] * (xs[i] - xbar) * (ys[i] - ybar);
    }
    DecayFit fit;
    fit.log_slope = sxy / sxx;
    fit.log_slope_stderr = std::sqrt(1.0 / sxx);
    fit.ratio = std::exp(fit.log_slope);
    fit.points = static_cast<int>(xs.size());
    return fit;
}

SlopeFit fit_separation_slope(const HistogramResult& result)
{
    double swxx = 0.0, swxy = 0.0;
    int points = 0;
    for (const Centroid& c : result.centroids()) {
        if (!(c.separation_stderr > 0.0)) continue;
        const double w = 1.0 / (c.separation_stderr * c.separation_stderr);
        swxx += w * c.round_trip * c.round_trip;
        swxy += w * c.round_trip * c.separation;
        ++points;
    }
    if (points == 0) throw ModelError("no populated round trips to fit");
    return {swxy / swxx, std::sqrt(1.0 / swxx), points};
}

} // namespace pumpsep
