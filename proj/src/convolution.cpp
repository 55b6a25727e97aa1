#include "pumpsep/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pumpsep/errors.hpp"

namespace pumpsep {

namespace {

double jitter_sigma(double jitter_fwhm)
{
    if (!(jitter_fwhm >= 0.0) || !std::isfinite(jitter_fwhm))
        throw DomainError("jitter must be >= 0");
    return jitter_fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

SampledDensity extended_output(const SampledDensity& in, std::size_t half)
{
    SampledDensity out;
    out.kind = in.kind;
    out.grid.step = in.grid.step;
    out.grid.start = in.grid.start - static_cast<double>(half) * in.grid.step;
    out.grid.count = in.grid.count + 2 * half;
    out.values.assign(out.grid.count, 0.0);
    return out;
}

// out[j] = sum_m in[j - half - m] * w[m + half]
inline double convolve_at(const std::vector<double>& in, const std::vector<double>& w,
                          std::size_t half, std::size_t j)
{
    const auto n = static_cast<std::ptrdiff_t>(in.size());
    const auto h = static_cast<std::ptrdiff_t>(half);
    const auto centre = static_cast<std::ptrdiff_t>(j) - h;
    const std::ptrdiff_t m_lo = std::max(-h, centre - (n - 1));
    const std::ptrdiff_t m_hi = std::min(h, centre);
    double acc = 0.0;
    for (std::ptrdiff_t m = m_lo; m <= m_hi; ++m)
        acc += in[static_cast<std::size_t>(centre - m)] * w[static_cast<std::size_t>(m + h)];
    return acc;
}

} // namespace

std::vector<double> gaussian_kernel(double sigma, double step, double half_width_sigmas)
{
    if (!(step > 0.0)) throw DomainError("kernel step must be > 0");
    if (!(half_width_sigmas > 0.0)) throw DomainError("kernel half width must be > 0");
    if (sigma == 0.0) return {1.0};
    const auto half = static_cast<std::size_t>(std::ceil(half_width_sigmas * sigma / step));
    std::vector<double> w(2 * half + 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = (static_cast<double>(i) - static_cast<double>(half)) * step / sigma;
        w[i] = std::exp(-0.5 * x * x);
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

SampledDensity convolve_jitter_serial(const SampledDensity& density, double jitter_fwhm,
                                      double half_width_sigmas)
{
    const double sigma = jitter_sigma(jitter_fwhm);
    if (sigma == 0.0) return density;
    const auto w = gaussian_kernel(sigma, density.grid.step, half_width_sigmas);
    const std::size_t half = w.size() / 2;
    SampledDensity out = extended_output(density, half);
    for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] = convolve_at(density.values, w, half, j);
    return out;
}

SampledDensity convolve_jitter(const SampledDensity& density, double jitter_fwhm,
                               double half_width_sigmas)
{
    const double sigma = jitter_sigma(jitter_fwhm);
    if (sigma == 0.0) return density;
    const auto w = gaussian_kernel(sigma, density.grid.step, half_width_sigmas);
    const std::size_t half = w.size() / 2;
    SampledDensity out = extended_output(density, half);
    const auto count = static_cast<std::ptrdiff_t>(out.values.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < count; ++j)
        out.values[static_cast<std::size_t>(j)] =
            convolve_at(density.values, w, half, static_cast<std::size_t>(j));
    return out;
}

} // namespace pumpsep
