#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "pumpsep/convolution.hpp"
#include "pumpsep/errors.hpp"

using namespace pumpsep;

namespace {

constexpr double kFwhmToSigma = 2.3548200450309493; // 2 sqrt(2 ln 2)

PulseSpec pulse(double mu, double center = 0.0)
{
    PulseSpec p;
    p.fwhm = 1e-12;
    p.center = center;
    p.mean_photons = mu;
    p.label = "test";
    return p;
}

SampledDensity sampled(const PulseSpec& p)
{
    const GridRequirement req = grid_requirement(p);
    TemporalGrid g;
    g.step = req.max_step;
    g.start = req.latest_start - 30.0 * p.sigma();
    g.count = static_cast<std::size_t>(std::ceil((req.earliest_end + 30.0 * p.sigma() - g.start) / g.step)) + 1;
    return sample_click_density(p, g);
}

} // namespace

TEST(Kernel, UnitSumSymmetric)
{
    const auto w = gaussian_kernel(2.0, 0.5, 12.0);
    EXPECT_EQ(w.size(), 2u * 48u + 1u);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-15);
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_DOUBLE_EQ(w[i], w[w.size() - 1 - i]);
    EXPECT_EQ(gaussian_kernel(0.0, 1.0, 12.0), std::vector<double>{1.0});
    EXPECT_THROW(gaussian_kernel(1.0, 0.0, 12.0), DomainError);
}

TEST(Convolution, ZeroJitterIsIdentity)
{
    const SampledDensity d = sampled(pulse(0.1));
    const SampledDensity out = convolve_jitter(d, 0.0);
    EXPECT_EQ(out.values, d.values);
    EXPECT_EQ(out.grid.start, d.grid.start);
    EXPECT_EQ(out.grid.count, d.grid.count);
}

TEST(Convolution, NegativeJitterRejected)
{
    const SampledDensity d = sampled(pulse(0.1));
    try {
        convolve_jitter(d, -1e-12);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_STREQ(e.what(), "jitter must be >= 0");
    }
    EXPECT_THROW(convolve_jitter_serial(d, -1e-12), DomainError);
}

TEST(Convolution, PreservesArea)
{
    for (double mu : {0.1, 1e9})
        for (double jitter : {1e-12, 4e-12, 20e-12}) {
            const SampledDensity d = sampled(pulse(mu));
            const SampledDensity out = convolve_jitter(d, jitter);
            EXPECT_NEAR(out.integral() / d.integral(), 1.0, 1e-6) << mu << " " << jitter;
        }
}

TEST(Convolution, VariancesAdd)
{
    for (double mu : {0.1, 1e9})
        for (double jitter : {2e-12, 20e-12}) {
            const SampledDensity d = sampled(pulse(mu));
            const Moments before = density_moments(d);
            const Moments after = density_moments(convolve_jitter(d, jitter));
            const double sj = jitter / kFwhmToSigma;
            const double expected = before.std * before.std + sj * sj;
            EXPECT_NEAR(after.std * after.std / expected, 1.0, 1e-3) << mu << " " << jitter;
            EXPECT_NEAR(after.mean, before.mean, 1e-3 * after.std);
        }
}

TEST(Convolution, Linear)
{
    const SampledDensity a = sampled(pulse(0.1));
    PulseSpec pb = pulse(1e9, 3e-12);
    const SampledDensity b = sample_click_density(pb, a.grid);
    SampledDensity sum = a;
    for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] = 2.0 * a.values[i] + 0.5 * b.values[i];

    const SampledDensity ca = convolve_jitter(a, 10e-12);
    const SampledDensity cb = convolve_jitter(b, 10e-12);
    const SampledDensity cs = convolve_jitter(sum, 10e-12);
    double peak = 0.0;
    for (double v : cs.values) peak = std::max(peak, v);
    for (std::size_t i = 0; i < cs.values.size(); ++i)
        ASSERT_NEAR(cs.values[i] / peak, (2.0 * ca.values[i] + 0.5 * cb.values[i]) / peak, 1e-9);
}

TEST(Convolution, GridExtendedByKernelHalfWidth)
{
    const SampledDensity d = sampled(pulse(0.1));
    const SampledDensity out = convolve_jitter(d, 20e-12);
    const auto half = gaussian_kernel(20e-12 / kFwhmToSigma, d.grid.step, kDefaultKernelHalfWidthSigmas).size() / 2;
    EXPECT_EQ(out.grid.count, d.grid.count + 2 * half);
    EXPECT_DOUBLE_EQ(out.grid.step, d.grid.step);
    EXPECT_NEAR(out.grid.start, d.grid.start - static_cast<double>(half) * d.grid.step, 1e-24);
}

TEST(Convolution, ParallelMatchesSerialBitForBit)
{
    const SampledDensity d = sampled(pulse(1e9));
    for (double jitter : {1e-12, 20e-12}) {
        const SampledDensity p = convolve_jitter(d, jitter);
        const SampledDensity s = convolve_jitter_serial(d, jitter);
        EXPECT_EQ(p.values, s.values);
        EXPECT_EQ(p.grid.start, s.grid.start);
    }
}
