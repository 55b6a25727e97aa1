#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace pumpsep {

// Pulse shapes, Poisson click statistics and click-probability densities on
// uniform time grids. All times are in seconds, densities in 1/s.

enum class PulseShape { Sech2 };

// How a FWHM is turned into the sech^2 argument scale sigma.
enum class WidthConvention {
    Sech2Exact,         // sigma = FWHM / (2 ln(1 + sqrt 2)), exact half maximum of sech^2
    GaussianEquivalent, // sigma = FWHM / (2 sqrt(2 ln 2))
    LiteralProduct,     // sigma = FWHM * 2 sqrt(2 ln 2)
};

std::string to_string(WidthConvention c);
WidthConvention width_convention_from_string(const std::string& name);

struct PulseSpec {
    PulseShape shape = PulseShape::Sech2;
    double fwhm = 1e-12;
    double center = 0.0;
    double mean_photons = 0.0;
    std::string label;
    WidthConvention width_convention = WidthConvention::Sech2Exact;

    // Throws DomainError when fwhm <= 0 or mean_photons < 0.
    void validate() const;
    double sigma() const;
};

struct TemporalGrid {
    double start = 0.0;
    double step = 1e-15;
    std::size_t count = 2;

    void validate() const;
    double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
    double end() const { return at(count - 1); }
};

enum class DensityKind { PhotonNumberDensity, ClickProbabilityDensity };

struct SampledDensity {
    TemporalGrid grid;
    std::vector<double> values;
    DensityKind kind = DensityKind::ClickProbabilityDensity;

    void validate() const;
    // Trapezoidal integral over the whole grid.
    double integral() const;
    // Integral over [lo, hi] clipped to the grid. Interpolates exponentially
    // between positive samples and linearly where a sample is zero.
    double integral_over(double lo, double hi) const;
};

struct DetectorSpec {
    double jitter_fwhm = 0.0;
    double efficiency = 1.0;
    double dead_time = 0.0;      // loop emulator only
    double dark_count_rate = 0.0; // loop emulator only

    void validate() const;
};

struct Moments {
    double total = 0.0;
    double mean = 0.0;
    double std = 0.0;
};

double sigma_from_fwhm(double fwhm, WidthConvention convention);

// S(t) = A/(2 sigma) sech^2((t - t_c)/sigma)
double photon_number_density(double t, const PulseSpec& pulse);

// mu(t) = A logistic(2 (t - t_c)/sigma); equals (A/2)(1 + tanh((t - t_c)/sigma))
// but keeps relative precision deep in the leading tail.
double cumulative_mean_photons(double t, const PulseSpec& pulse);

// 1 - exp(-mu), the probability of at least one photon in a Poisson state.
double click_probability(double mu);

// Cumulative click probability 1 - exp(-mu(t)).
double cumulative_click_probability(double t, const PulseSpec& pulse);

// d/dt [1 - exp(-mu(t))] = S(t) exp(-mu(t)).
// For A >> 1 this peaks near t_c - (sigma/2) ln A, well ahead of the pulse center.
double click_density(double t, const PulseSpec& pulse);

// Smallest grid span that resolves the click density of `pulse`.
struct GridRequirement {
    double max_step;
    double latest_start;
    double earliest_end;
};
GridRequirement grid_requirement(const PulseSpec& pulse);

SampledDensity sample_click_density(const PulseSpec& pulse, const TemporalGrid& grid);
SampledDensity sample_photon_density(const PulseSpec& pulse, const TemporalGrid& grid);

Moments density_moments(const SampledDensity& density);

// Trapezoid rule on a uniform grid.
double trapezoid(std::span<const double> values, double step);

} // namespace pumpsep
