#pragma once

#include <vector>

#include "pumpsep/temporal.hpp"

namespace pumpsep {

// Gaussian jitter kernel truncation, in units of the kernel standard deviation.
inline constexpr double kDefaultKernelHalfWidthSigmas = 12.0;

// Unit-sum Gaussian weights sampled at multiples of `step`, centred on the
// middle element. Size is 2*H+1 with H = ceil(half_width_sigmas * sigma / step).
std::vector<double> gaussian_kernel(double sigma, double step, double half_width_sigmas);

// Convolve with a unit-area Gaussian of FWHM `jitter_fwhm`. The output grid is
// the input grid extended by the kernel half width on both sides, so the total
// integral is preserved. jitter_fwhm == 0 returns the input unchanged.
//
// The OpenMP version computes each output sample independently with the same
// summation order as the serial one; results are bit-identical.
SampledDensity convolve_jitter(const SampledDensity& density, double jitter_fwhm,
                               double half_width_sigmas = kDefaultKernelHalfWidthSigmas);

SampledDensity convolve_jitter_serial(const SampledDensity& density, double jitter_fwhm,
                                      double half_width_sigmas = kDefaultKernelHalfWidthSigmas);

} // namespace pumpsep
