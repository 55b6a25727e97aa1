// Serial reference vs OpenMP kernels: jitter convolution, jitter sweep and
// loop emulation. Prints wall time and checks the outputs agree.

#include <chrono>
#include <iostream>

#include <omp.h>

#include "pumpsep/convolution.hpp"
#include "pumpsep/feasibility.hpp"
#include "pumpsep/loop_emulator.hpp"

using namespace pumpsep;

namespace {

template <typename F>
double time_ms(F&& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main(int argc, char** argv)
{
    const std::uint64_t trials = argc > 1 ? std::stoull(argv[1]) : 200'000;
    std::cout << "threads " << omp_get_max_threads() << "\n";

    PulseSpec pump;
    pump.mean_photons = 1e9;
    pump.center = 60e-12;
    const double sigma = pump.sigma();
    TemporalGrid grid{-30e-12, sigma / 10.0, 0};
    grid.count = static_cast<std::size_t>((120e-12 - grid.start) / grid.step);
    const SampledDensity d = sample_click_density(pump, grid);

    SampledDensity serial, parallel;
    const double t_serial = time_ms([&] { serial = convolve_jitter_serial(d, 20e-12); });
    const double t_parallel = time_ms([&] { parallel = convolve_jitter(d, 20e-12); });
    std::cout << "convolve_jitter  points " << d.values.size() << "  serial " << t_serial << " ms  parallel "
              << t_parallel << " ms  identical " << (serial.values == parallel.values) << "\n";

    const ScenarioConfig cfg = default_scenario(builtin_platforms()[2], 20e-12);
    const std::vector<double> jitters{4e-12, 8e-12, 12e-12, 16e-12, 20e-12};
    const double t_sweep = time_ms([&] { (void)jitter_sweep(cfg, jitters); });
    double t_rows = 0.0;
    for (double j : jitters) {
        ScenarioConfig c = cfg;
        c.detector.jitter_fwhm = j;
        t_rows += time_ms([&] { (void)solve_separation_distance(c); });
    }
    std::cout << "jitter_sweep     rows 5  row-by-row " << t_rows << " ms  parallel rows " << t_sweep << " ms\n";

    const LoopConfig loop;
    const DetectorSpec det = default_loop_detector();
    HistogramResult hs, hp;
    const double l_serial = time_ms([&] { hs = run_emulation_serial(loop, det, trials, 7); });
    const double l_parallel = time_ms([&] { hp = run_emulation(loop, det, trials, 7); });
    std::cout << "run_emulation    trials " << trials << "  serial " << l_serial << " ms  parallel " << l_parallel
              << " ms  identical " << (hs == hp) << "\n";
    return 0;
}
