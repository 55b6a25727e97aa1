#include "pumpsep/report.hpp"

#include <iomanip>

#include "pumpsep/units.hpp"

namespace pumpsep {

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

// JSON cannot carry inf; unbounded suppression is emitted as null.
nlohmann::ordered_json json_number(double v)
{
    if (!std::isfinite(v)) return nullptr;
    return v;
}

} // namespace

void write_platforms_csv(std::ostream& out, const std::vector<PlatformSpec>& platforms)
{
    out << "name,process,pump_wavelength_nm,pump_polarization,pump_group_index,pump_loss_db_per_cm,"
           "signal_wavelength_nm,signal_polarization,signal_group_index,signal_loss_db_per_cm,"
           "delta_group_index,default_pump_photons,default_pair_probability\n";
    for (const auto& p : platforms) {
        out << csv_field(p.name) << ',' << to_string(p.process) << ',' << format_number(p.pump.wavelength_nm) << ','
            << to_string(p.pump.polarization) << ',' << format_number(p.pump.group_index) << ','
            << format_number(p.pump.loss_db_per_cm) << ',' << format_number(p.signal.wavelength_nm) << ','
            << to_string(p.signal.polarization) << ',' << format_number(p.signal.group_index) << ','
            << format_number(p.signal.loss_db_per_cm) << ',' << format_number(p.delta_group_index()) << ','
            << format_number(p.default_pump_photons) << ',' << format_number(p.default_pair_probability) << '\n';
    }
}

void write_separation_csv(std::ostream& out, const std::string& platform, double jitter_fwhm,
                          const SeparationResult& r)
{
    out << "platform,jitter_ps,distance_m,arrival_separation_ps,signal_loss_db,pump_loss_db,contamination,"
           "suppression_db,p_signal,p_pump,window_lo_ps,window_hi_ps,iterations\n";
    out << csv_field(platform) << ',' << format_number(jitter_fwhm / units::ps) << ',' << format_number(r.distance)
        << ',' << format_number(r.arrival_separation / units::ps) << ',' << format_number(r.signal_loss_db) << ','
        << format_number(r.pump_loss_db) << ',' << format_number(r.report.contamination) << ','
        << format_number(r.report.suppression_db) << ',' << format_number(r.report.p_signal) << ','
        << format_number(r.report.p_pump) << ',' << format_number(r.report.t_lo / units::ps) << ','
        << format_number(r.report.t_hi / units::ps) << ',' << r.iterations << '\n';
}

nlohmann::ordered_json separation_json(const std::string& platform, double jitter_fwhm, const SeparationResult& r)
{
    nlohmann::ordered_json j;
    j["platform"] = platform;
    j["jitter_ps"] = jitter_fwhm / units::ps;
    j["distance_m"] = r.distance;
    j["arrival_separation_ps"] = r.arrival_separation / units::ps;
    j["signal_loss_db"] = r.signal_loss_db;
    j["pump_loss_db"] = r.pump_loss_db;
    j["contamination"] = r.report.contamination;
    j["suppression_db"] = json_number(r.report.suppression_db);
    j["p_signal"] = r.report.p_signal;
    j["p_pump"] = r.report.p_pump;
    j["window_lo_ps"] = r.report.t_lo / units::ps;
    j["window_hi_ps"] = r.report.t_hi / units::ps;
    j["iterations"] = r.iterations;
    return j;
}

void write_separation_text(std::ostream& out, const std::string& platform, double jitter_fwhm,
                           const SeparationResult& r)
{
    out << "platform            " << platform << '\n'
        << "jitter              " << format_number(jitter_fwhm / units::ps) << " ps\n"
        << "distance            " << format_number(r.distance) << " m\n"
        << "arrival separation  " << format_number(r.arrival_separation / units::ps) << " ps\n"
        << "signal loss         " << format_number(r.signal_loss_db) << " dB\n"
        << "pump loss           " << format_number(r.pump_loss_db) << " dB\n"
        << "contamination       " << format_number(r.report.contamination) << '\n'
        << "suppression         " << format_number(r.report.suppression_db) << " dB\n";
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
    bool any_error = false;
    for (const auto& row : rows) any_error = any_error || !row.result;
    out << "jitter_ps,distance_m,signal_loss_db,pump_loss_db,contamination,suppression_db";
    out << (any_error ? ",error\n" : "\n");
    for (const auto& row : rows) {
        out << format_number(row.jitter_fwhm / units::ps);
        if (row.result) {
            const auto& r = *row.result;
            out << ',' << format_number(r.distance) << ',' << format_number(r.signal_loss_db) << ','
                << format_number(r.pump_loss_db) << ',' << format_number(r.report.contamination) << ','
                << format_number(r.report.suppression_db);
            if (any_error) out << ',';
        } else {
            out << ",,,,,," << csv_field(row.error);
        }
        out << '\n';
    }
}

nlohmann::ordered_json sweep_json(const std::vector<SweepRow>& rows)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json j;
        j["jitter_ps"] = row.jitter_fwhm / units::ps;
        if (row.result) {
            j["distance_m"] = row.result->distance;
            j["signal_loss_db"] = row.result->signal_loss_db;
            j["pump_loss_db"] = row.result->pump_loss_db;
            j["contamination"] = row.result->report.contamination;
            j["suppression_db"] = json_number(row.result->report.suppression_db);
        } else {
            j["error"] = row.error;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

void write_profile_csv(std::ostream& out, const DistanceProfile& p)
{
    out << "t_ps,signal_photon_density,pump_photon_density,signal_cumulative,pump_cumulative,"
           "signal_click_density_jittered,pump_click_density_jittered\n";
    const TemporalGrid& g = p.signal_jittered.grid;
    for (std::size_t i = 0; i < g.count; ++i) {
        const double t = g.at(i);
        // densities per picosecond so that they integrate against t_ps
        out << format_number(t / units::ps) << ',' << format_number(photon_number_density(t, p.signal) * units::ps)
            << ',' << format_number(photon_number_density(t, p.pump) * units::ps) << ','
            << format_number(cumulative_click_probability(t, p.signal)) << ','
            << format_number(cumulative_click_probability(t, p.pump)) << ','
            << format_number(p.signal_jittered.values[i] * units::ps) << ','
            << format_number(p.pump_jittered.values[i] * units::ps) << '\n';
    }
}

void write_histogram_csv(std::ostream& out, const HistogramResult& r)
{
    out << "bin_start_ns,counts_signal,counts_pump\n";
    for (std::size_t i = 0; i < r.counts_signal.size(); ++i)
        out << format_number(r.bin_edges[i] / units::ns) << ',' << r.counts_signal[i] << ',' << r.counts_pump[i]
            << '\n';
    out << "\nround_trip,t_signal_ns,t_pump_ns,separation_ns\n";
    for (const Centroid& c : r.centroids())
        out << c.round_trip << ',' << format_number(c.t_signal / units::ns) << ','
            << format_number(c.t_pump / units::ns) << ',' << format_number(c.separation / units::ns) << '\n';
}

nlohmann::ordered_json histogram_json(const HistogramResult& r)
{
    nlohmann::ordered_json j;
    j["trials"] = r.trials;
    auto bins = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.counts_signal.size(); ++i)
        bins.push_back({{"bin_start_ns", r.bin_edges[i] / units::ns},
                        {"counts_signal", r.counts_signal[i]},
                        {"counts_pump", r.counts_pump[i]}});
    j["bins"] = std::move(bins);
    auto cents = nlohmann::ordered_json::array();
    for (const Centroid& c : r.centroids())
        cents.push_back({{"round_trip", c.round_trip},
                         {"t_signal_ns", c.t_signal / units::ns},
                         {"t_pump_ns", c.t_pump / units::ns},
                         {"separation_ns", c.separation / units::ns}});
    j["centroids"] = std::move(cents);
    return j;
}

} // namespace pumpsep
