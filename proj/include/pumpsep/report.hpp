#pragma once

#include <ostream>
#include <vector>

#include <json.hpp>

#include "pumpsep/dispersion.hpp"
#include "pumpsep/feasibility.hpp"
#include "pumpsep/loop_emulator.hpp"

namespace pumpsep {

// CSV/JSON renderings shared by the CLI and the tests. Column sets are frozen;
// new columns only ever go at the end.

void write_platforms_csv(std::ostream& out, const std::vector<PlatformSpec>& platforms);

void write_separation_csv(std::ostream& out, const std::string& platform, double jitter_fwhm,
                          const SeparationResult& result);
nlohmann::ordered_json separation_json(const std::string& platform, double jitter_fwhm,
                                       const SeparationResult& result);
void write_separation_text(std::ostream& out, const std::string& platform, double jitter_fwhm,
                           const SeparationResult& result);

// jitter_ps,distance_m,signal_loss_db,pump_loss_db,contamination,suppression_db[,error]
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
nlohmann::ordered_json sweep_json(const std::vector<SweepRow>& rows);

void write_profile_csv(std::ostream& out, const DistanceProfile& profile);

// bin_start_ns,counts_signal,counts_pump then a blank line and
// round_trip,t_signal_ns,t_pump_ns,separation_ns
void write_histogram_csv(std::ostream& out, const HistogramResult& result);
nlohmann::ordered_json histogram_json(const HistogramResult& result);

} // namespace pumpsep
