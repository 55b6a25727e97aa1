#include "pumpsep/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pumpsep/errors.hpp"
#include "pumpsep/units.hpp"

namespace pumpsep {

namespace {

// sech^2(u) without overflowing cosh for large |u|.
double sech2(double u)
{
    const double e = std::exp(-2.0 * std::abs(u));
    const double d = 1.0 + e;
    return 4.0 * e / (d * d);
}

// 1 / (1 + exp(-y))
double logistic(double y)
{
    if (y >= 0.0) return 1.0 / (1.0 + std::exp(-y));
    const double e = std::exp(y);
    return e / (1.0 + e);
}

void check_grid_covers(const PulseSpec& pulse, const TemporalGrid& grid, bool spike)
{
    grid.validate();
    const GridRequirement req = grid_requirement(pulse);
    const double slack = 1e-9 * req.max_step;
    if (grid.step > req.max_step * (1.0 + 1e-12))
        throw ConfigError("grid step " + format_number(grid.step) + " s exceeds sigma/10 = " +
                          format_number(req.max_step) + " s for pulse '" + pulse.label + "'");
    const double latest_start =
        spike ? req.latest_start : pulse.center - 8.0 * pulse.sigma();
    if (grid.start > latest_start + slack)
        throw ConfigError(spike ? "grid misses leading-tail click spike of pulse '" + pulse.label +
                                      "' (start must be <= " + format_number(latest_start) + " s)"
                                : "grid misses leading edge of pulse '" + pulse.label + "'");
    if (grid.end() < req.earliest_end - slack)
        throw ConfigError("grid misses trailing edge of pulse '" + pulse.label +
                          "' (end must be >= " + format_number(req.earliest_end) + " s)");
}

} // namespace

std::string to_string(WidthConvention c)
{
    switch (c) {
    case WidthConvention::Sech2Exact: return "sech2-exact";
    case WidthConvention::GaussianEquivalent: return "gaussian-equivalent";
    case WidthConvention::LiteralProduct: return "literal-product";
    }
    return "?";
}

WidthConvention width_convention_from_string(const std::string& name)
{
    if (name == "sech2-exact") return WidthConvention::Sech2Exact;
    if (name == "gaussian-equivalent") return WidthConvention::GaussianEquivalent;
    if (name == "literal-product") return WidthConvention::LiteralProduct;
    throw ConfigError("unknown width convention '" + name +
                      "' (expected sech2-exact, gaussian-equivalent or literal-product)");
}

void PulseSpec::validate() const
{
    if (!(fwhm > 0.0) || !std::isfinite(fwhm))
        throw DomainError("pulse '" + label + "': fwhm must be > 0");
    if (!(mean_photons >= 0.0) || !std::isfinite(mean_photons))
        throw DomainError("pulse '" + label + "': mean_photons must be >= 0");
    if (!std::isfinite(center)) throw DomainError("pulse '" + label + "': center must be finite");
}

double PulseSpec::sigma() const { return sigma_from_fwhm(fwhm, width_convention); }

void TemporalGrid::validate() const
{
    if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("grid step must be > 0");
    if (count < 2) throw ConfigError("grid needs at least 2 points");
    if (!std::isfinite(start)) throw ConfigError("grid start must be finite");
}

void SampledDensity::validate() const
{
    grid.validate();
    if (values.size() != grid.count)
        throw ConfigError("density has " + std::to_string(values.size()) +
                          " values for a grid of " + std::to_string(grid.count));
    for (double v : values)
        if (!std::isfinite(v) || v < 0.0)
            throw DomainError("density values must be finite and >= 0");
}

double SampledDensity::integral() const { return trapezoid(values, grid.step); }

double SampledDensity::integral_over(double lo, double hi) const
{
    lo = std::max(lo, grid.start);
    hi = std::min(hi, grid.end());
    if (!(hi > lo)) return 0.0;

    // Integral over the fractional part [s0, s1] of segment i. Between positive
    // samples the interpolant is exponential, which keeps steep Gaussian and
    // exponential tails accurate; otherwise it is linear.
    const auto segment = [&](std::size_t i, double s0, double s1) {
        const double a = values[i];
        const double b = values[i + 1];
        if (a > 0.0 && b > 0.0) {
            const double r = std::log(b / a);
            if (std::abs(r) > 1e-8) return grid.step * a * (std::exp(r * s1) - std::exp(r * s0)) / r;
        }
        return grid.step * (a * (s1 - s0) + 0.5 * (b - a) * (s1 * s1 - s0 * s0));
    };

    const double x_lo = (lo - grid.start) / grid.step;
    const double x_hi = (hi - grid.start) / grid.step;
    const std::size_t last = grid.count - 2;
    const auto i0 = std::min(static_cast<std::size_t>(std::floor(x_lo)), last);
    const auto i1 = std::min(static_cast<std::size_t>(std::floor(x_hi)), last);
    const double s_lo = x_lo - static_cast<double>(i0);
    const double s_hi = std::min(x_hi - static_cast<double>(i1), 1.0);
    if (i0 == i1) return segment(i0, s_lo, s_hi);

    double sum = segment(i0, s_lo, 1.0);
    for (std::size_t i = i0 + 1; i < i1; ++i) sum += segment(i, 0.0, 1.0);
    return sum + segment(i1, 0.0, s_hi);
}

void DetectorSpec::validate() const
{
    if (!(jitter_fwhm >= 0.0) || !std::isfinite(jitter_fwhm))
        throw DomainError("jitter must be >= 0");
    if (!(efficiency >= 0.0 && efficiency <= 1.0))
        throw DomainError("detector efficiency must lie in [0, 1]");
    if (!(dead_time >= 0.0) || !std::isfinite(dead_time))
        throw DomainError("dead time must be >= 0");
    if (!(dark_count_rate >= 0.0) || !std::isfinite(dark_count_rate))
        throw DomainError("dark count rate must be >= 0");
}

double sigma_from_fwhm(double fwhm, WidthConvention convention)
{
    if (!(fwhm > 0.0)) throw DomainError("fwhm must be > 0");
    const double gauss = 2.0 * std::sqrt(2.0 * std::numbers::ln2);
    switch (convention) {
    case WidthConvention::Sech2Exact: return fwhm / (2.0 * std::log(1.0 + std::numbers::sqrt2));
    case WidthConvention::GaussianEquivalent: return fwhm / gauss;
    case WidthConvention::LiteralProduct: return fwhm * gauss;
    }
    throw DomainError("unknown width convention");
}

double photon_number_density(double t, const PulseSpec& pulse)
{
    const double sigma = pulse.sigma();
    return pulse.mean_photons / (2.0 * sigma) * sech2((t - pulse.center) / sigma);
}

double cumulative_mean_photons(double t, const PulseSpec& pulse)
{
    const double sigma = pulse.sigma();
    return pulse.mean_photons * logistic(2.0 * (t - pulse.center) / sigma);
}

double click_probability(double mu)
{
    if (!(mu >= 0.0)) throw DomainError("mean photon number must be >= 0");
    return -std::expm1(-mu);
}

double cumulative_click_probability(double t, const PulseSpec& pulse)
{
    return -std::expm1(-cumulative_mean_photons(t, pulse));
}

double click_density(double t, const PulseSpec& pulse)
{
    if (pulse.mean_photons == 0.0) return 0.0;
    return photon_number_density(t, pulse) * std::exp(-cumulative_mean_photons(t, pulse));
}

GridRequirement grid_requirement(const PulseSpec& pulse)
{
    pulse.validate();
    const double sigma = pulse.sigma();
    const double advance = 0.5 * sigma * std::log(std::max(pulse.mean_photons, std::numbers::e));
    return {sigma / 10.0, pulse.center - advance - 8.0 * sigma, pulse.center + 8.0 * sigma};
}

SampledDensity sample_click_density(const PulseSpec& pulse, const TemporalGrid& grid)
{
    check_grid_covers(pulse, grid, true);
    SampledDensity out{grid, std::vector<double>(grid.count), DensityKind::ClickProbabilityDensity};
    for (std::size_t i = 0; i < grid.count; ++i) out.values[i] = click_density(grid.at(i), pulse);
    return out;
}

SampledDensity sample_photon_density(const PulseSpec& pulse, const TemporalGrid& grid)
{
    check_grid_covers(pulse, grid, false);
    SampledDensity out{grid, std::vector<double>(grid.count), DensityKind::PhotonNumberDensity};
    for (std::size_t i = 0; i < grid.count; ++i)
        out.values[i] = photon_number_density(grid.at(i), pulse);
    return out;
}

Moments density_moments(const SampledDensity& density)
{
    const auto& v = density.values;
    const auto& g = density.grid;
    const double total = density.integral();
    if (!(total > 0.0)) throw ModelError("degenerate density: total mass is zero");

    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] * g.at(i);
    const double mean = trapezoid(w, g.step) / total;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = g.at(i) - mean;
        w[i] = v[i] * d * d;
    }
    const double var = trapezoid(w, g.step) / total;
    return {total, mean, std::sqrt(std::max(var, 0.0))};
}

double trapezoid(std::span<const double> values, double step)
{
    if (values.size() < 2) return 0.0;
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
    return sum * step;
}

} // namespace pumpsep
