#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "pumpsep/feasibility.hpp"
#include "pumpsep/loop_emulator.hpp"

namespace pumpsep {

enum class OutputFormat { CSV, JSON };

// Run configuration file. Dimensionless values are plain numbers; physical
// quantities are unit-bearing strings ("156.9 ns", "30 m", "125 kHz", "0.5 dB").
//
// {
//   "scenario": { "platform": "Ti:LN", "platform_file": "x.json", "pulse_fwhm": "1 ps",
//                 "pump_photons": 1e9, "pair_probability": 0.1,
//                 "width_convention": "sech2-exact", "contamination_threshold": 0.01,
//                 "max_length": "1000 km" },
//   "detector": { "jitter_fwhm": "20 ps", "efficiency": 1, "dead_time": "50 ns",
//                 "dark_count_rate": "100 Hz" },
//   "loop":     { "loop_delay": "156.9 ns", "rep_rate": "125 kHz", "bins": 51, ... },
//   "output":   { "path": "out.csv", "format": "csv" }
// }
//
// Every section and key is optional; unknown keys are rejected by name.
struct RunConfig {
    std::optional<std::string> platform;
    std::optional<std::string> platform_file;
    std::optional<double> pulse_fwhm;
    std::optional<double> pump_photons;
    std::optional<double> pair_probability;
    std::optional<WidthConvention> width_convention;
    std::optional<double> contamination_threshold;
    std::optional<double> max_length;

    std::optional<double> jitter_fwhm;
    std::optional<double> efficiency;
    std::optional<double> dead_time;
    std::optional<double> dark_count_rate;

    LoopConfig loop;
    std::optional<std::string> output_path;
    std::optional<OutputFormat> output_format;
};

RunConfig parse_run_config(const std::string& text, const std::string& source_name = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

// Applies the scenario overrides on top of a platform's defaults.
ScenarioConfig apply_scenario(const RunConfig& run, ScenarioConfig base);
DetectorSpec apply_detector(const RunConfig& run, DetectorSpec base);

} // namespace pumpsep
