#include "pumpsep/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pumpsep/errors.hpp"
#include "pumpsep/units.hpp"

namespace pumpsep {

namespace {

// Sampling margin around each pulse in units of sigma. The click density falls
// off as exp(-2|u|), so 40 sigma leaves less than e^-80 of either tail out.
constexpr double kSampleMarginSigmas = 40.0;
constexpr std::size_t kMaxGridPoints = 4'000'000;
constexpr double kMinWindowFraction = 0.99;

PulseSpec make_pulse(const ScenarioConfig& cfg, double center, double mu, const char* label)
{
    PulseSpec p;
    p.fwhm = cfg.pulse_fwhm;
    p.center = center;
    p.mean_photons = mu;
    p.label = label;
    p.width_convention = cfg.width_convention;
    return p;
}

TemporalGrid covering_grid(const PulseSpec& a, const PulseSpec& b)
{
    const double sigma = a.sigma();
    const auto start_of = [&](const PulseSpec& p) {
        return p.center - 0.5 * sigma * std::log(std::max(p.mean_photons, std::numbers::e)) -
               kSampleMarginSigmas * sigma;
    };
    const double start = std::min(start_of(a), start_of(b));
    const double end = std::max(a.center, b.center) + kSampleMarginSigmas * sigma;
    TemporalGrid g;
    g.step = sigma / 10.0;
    g.start = start;
    const double span = (end - start) / g.step;
    if (span > static_cast<double>(kMaxGridPoints))
        throw ModelError("evaluation grid too large (" + format_number(span) +
                         " points); pulse separation " + format_number((b.center - a.center) / units::ps) +
                         " ps is far beyond the jitter scale");
    g.count = static_cast<std::size_t>(std::ceil(span)) + 1;
    return g;
}

} // namespace

void ScenarioConfig::validate() const
{
    validate_platform(platform);
    detector.validate();
    if (!(pulse_fwhm > 0.0)) throw DomainError("pulse FWHM must be > 0");
    if (!(pair_probability > 0.0 && pair_probability < 1.0))
        throw DomainError("pair probability must lie in (0, 1)");
    if (!(pump_photons >= 1.0)) throw DomainError("pump photons must be >= 1");
    if (!(contamination_threshold > 0.0 && contamination_threshold < 1.0))
        throw DomainError("contamination threshold must lie in (0, 1)");
    if (!(max_length > 0.0)) throw DomainError("max length must be > 0");
    if (!(kernel_half_width_sigmas > 0.0)) throw DomainError("kernel half width must be > 0");
}

ScenarioConfig default_scenario(const PlatformSpec& platform, double jitter_fwhm)
{
    ScenarioConfig cfg;
    cfg.platform = platform;
    cfg.detector.jitter_fwhm = jitter_fwhm;
    cfg.pump_photons = platform.default_pump_photons;
    cfg.pair_probability = platform.default_pair_probability;
    return cfg;
}

double suppression_db(double p_signal, double p_pump, double pump_photons, double pair_probability)
{
    const double anchor = 10.0 * std::log10(pump_photons / pair_probability);
    if (p_pump == 0.0) return HUGE_VAL;
    return anchor + 10.0 * std::log10(p_signal / p_pump);
}

DistanceProfile profile_at_distance(const ScenarioConfig& cfg, double length)
{
    cfg.validate();
    if (!(length >= 0.0)) throw DomainError("length must be >= 0");

    const double tau = arrival_separation(length, cfg.platform);
    const double signal_loss = propagation_loss_db(length, cfg.platform.signal);
    const double pump_loss = propagation_loss_db(length, cfg.platform.pump);
    const double eta = cfg.detector.efficiency;
    const double mu_signal = attenuate(cfg.pair_probability, signal_loss) * eta;
    const double mu_pump = attenuate(cfg.pump_photons, pump_loss) * eta;
    if (!(mu_signal > 0.0))
        throw ModelError("signal extinguished by loss (" + format_number(signal_loss) + " dB at " +
                         format_number(length) + " m)");

    DistanceProfile out;
    out.signal = make_pulse(cfg, 0.0, mu_signal, "signal");
    out.pump = make_pulse(cfg, tau, mu_pump, "pump");
    out.grid = covering_grid(out.signal, out.pump);

    const double jitter = cfg.detector.jitter_fwhm;
    out.signal_jittered =
        convolve_jitter(sample_click_density(out.signal, out.grid), jitter, cfg.kernel_half_width_sigmas);
    out.pump_jittered =
        convolve_jitter(sample_click_density(out.pump, out.grid), jitter, cfg.kernel_half_width_sigmas);

    const Moments m = density_moments(out.signal_jittered);
    if (!(m.total > 0.0))
        throw ModelError("signal extinguished by loss (" + format_number(signal_loss) + " dB)");

    WindowReport& r = out.report;
    r.t_lo = m.mean - 3.0 * m.std;
    r.t_hi = m.mean + 3.0 * m.std;
    r.p_signal = out.signal_jittered.integral_over(r.t_lo, r.t_hi);
    r.p_pump = out.pump_jittered.integral_over(r.t_lo, r.t_hi);
    r.window_signal_fraction = r.p_signal / m.total;
    if (r.window_signal_fraction < kMinWindowFraction)
        throw ModelError("3-sigma window captures only " + format_number(r.window_signal_fraction) +
                         " of the signal click probability");
    const double total = r.p_signal + r.p_pump;
    r.contamination = r.p_pump / total;
    r.filtered_signal_probability = r.p_signal / total;
    r.suppression_db = suppression_db(r.p_signal, r.p_pump, cfg.pump_photons, cfg.pair_probability);
    return out;
}

WindowReport evaluate_at_distance(const ScenarioConfig& cfg, double length)
{
    return profile_at_distance(cfg, length).report;
}

std::vector<CurvePoint> filtered_signal_curve(const ScenarioConfig& cfg, const std::vector<double>& lengths)
{
    if (lengths.empty()) throw DomainError("length list must not be empty");
    for (double l : lengths)
        if (!(l >= 0.0)) throw DomainError("length must be >= 0");

    std::vector<CurvePoint> out(lengths.size());
    std::vector<std::string> errors(lengths.size());
    const auto n = static_cast<std::ptrdiff_t>(lengths.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = {lengths[k], evaluate_at_distance(cfg, lengths[k]).filtered_signal_probability};
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw ModelError(e);
    return out;
}

SeparationResult solve_separation_distance(const ScenarioConfig& cfg)
{
    cfg.validate();
    const double threshold = cfg.contamination_threshold;
    SeparationResult res;

    const auto evaluate = [&](double length) {
        ++res.iterations;
        try {
            return evaluate_at_distance(cfg, length);
        } catch (const ModelError& e) {
            throw ModelError("separation unreachable: " + std::string(e.what()));
        }
    };
    const auto monotone_violation = [](double lo_val, double mid_val, double hi_val) {
        const double tol = 1e-12 + 1e-9 * std::abs(lo_val);
        return mid_val > lo_val + tol || mid_val < hi_val - tol;
    };
    const auto finish = [&](double length, double lower, const WindowReport& report) {
        res.distance = length;
        res.lower_bound = lower;
        res.bracket_width = length > 0.0 ? (length - lower) / length : 0.0;
        res.arrival_separation = arrival_separation(length, cfg.platform);
        res.signal_loss_db = propagation_loss_db(length, cfg.platform.signal);
        res.pump_loss_db = propagation_loss_db(length, cfg.platform.pump);
        res.report = report;
        return res;
    };

    WindowReport at_lo = evaluate(0.0);
    if (at_lo.contamination <= threshold) return finish(0.0, 0.0, at_lo);

    double lo = 0.0;
    double hi = 1e-3;
    WindowReport at_hi;
    for (;;) {
        if (hi > cfg.max_length) {
            if (lo >= cfg.max_length)
                throw ModelError("separation unreachable within " + format_number(cfg.max_length) +
                                 " m (contamination " + format_number(at_lo.contamination) + ")");
            hi = cfg.max_length;
        }
        at_hi = evaluate(hi);
        if (at_hi.contamination <= threshold) break;
        lo = hi;
        at_lo = at_hi;
        hi *= 2.0;
    }
    res.initial_lo = lo;
    res.initial_hi = hi;

    while ((hi - lo) / hi > kSolverRelativeWidth) {
        const double mid = 0.5 * (lo + hi);
        const WindowReport at_mid = evaluate(mid);
        if (monotone_violation(at_lo.contamination, at_mid.contamination, at_hi.contamination))
            throw ModelError("contamination is not monotone between " + format_number(lo) + " m and " +
                             format_number(hi) + " m; scan that range with a finer length grid");
        if (at_mid.contamination > threshold) {
            lo = mid;
            at_lo = at_mid;
        } else {
            hi = mid;
            at_hi = at_mid;
        }
    }
    return finish(hi, lo, at_hi);
}

std::vector<SweepRow> jitter_sweep(const ScenarioConfig& cfg, const std::vector<double>& jitters)
{
    if (jitters.empty()) throw DomainError("jitter list must not be empty");
    for (double j : jitters)
        if (!(j >= 0.0)) throw DomainError("jitter must be >= 0");

    std::vector<SweepRow> rows(jitters.size());
    for (std::size_t i = 0; i < jitters.size(); ++i) rows[i].jitter_fwhm = jitters[i];
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.jitter_fwhm < b.jitter_fwhm; });

    const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        SweepRow& row = rows[static_cast<std::size_t>(i)];
        ScenarioConfig c = cfg;
        c.detector.jitter_fwhm = row.jitter_fwhm;
        try {
            row.result = solve_separation_distance(c);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    }
    return rows;
}

} // namespace pumpsep
