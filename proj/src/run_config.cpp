#include "pumpsep/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pumpsep/errors.hpp"
#include "pumpsep/platform_io.hpp"
#include "pumpsep/units.hpp"

namespace pumpsep {

using nlohmann::json;

namespace {

class Section {
public:
    Section(const json& obj, std::string name, std::set<std::string> allowed)
        : obj_(obj), name_(std::move(name))
    {
        if (!obj_.is_object()) throw ConfigError("section '" + name_ + "' must be an object");
        for (const auto& [key, value] : obj_.items())
            if (!allowed.contains(key)) throw ConfigError("unknown key '" + name_ + "." + key + "'");
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    double number(const std::string& key) const
    {
        const json& v = obj_.at(key);
        if (!v.is_number()) throw ConfigError("'" + name_ + "." + key + "' must be a number");
        return v.get<double>();
    }

    std::string string(const std::string& key) const
    {
        const json& v = obj_.at(key);
        if (!v.is_string()) throw ConfigError("'" + name_ + "." + key + "' must be a string");
        return v.get<std::string>();
    }

    double quantity(const std::string& key, Dimension dim) const
    {
        const json& v = obj_.at(key);
        if (!v.is_string())
            throw ConfigError("'" + name_ + "." + key + "' must be a quantity string with a unit, e.g. \"" +
                              example(dim) + "\"");
        try {
            return parse_quantity(v.get<std::string>(), dim);
        } catch (const ConfigError& e) {
            throw ConfigError("'" + name_ + "." + key + "': " + e.what());
        }
    }

    template <typename T>
    void maybe_number(const std::string& key, T& out) const
    {
        if (has(key)) out = number(key);
    }
    template <typename T>
    void maybe_quantity(const std::string& key, Dimension dim, T& out) const
    {
        if (has(key)) out = quantity(key, dim);
    }

private:
    static const char* example(Dimension dim)
    {
        switch (dim) {
        case Dimension::Time: return "20 ps";
        case Dimension::Length: return "30 m";
        case Dimension::Frequency: return "125 kHz";
        case Dimension::Attenuation: return "0.5 dB";
        }
        return "";
    }

    const json& obj_;
    std::string name_;
};

RunConfig from_json(const json& doc)
{
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    RunConfig rc;
    for (const auto& [key, value] : doc.items())
        if (key != "scenario" && key != "detector" && key != "loop" && key != "output")
            throw ConfigError("unknown key '" + key + "'");

    if (doc.contains("scenario")) {
        const Section s(doc["scenario"], "scenario",
                        {"platform", "platform_file", "pulse_fwhm", "pump_photons", "pair_probability",
                         "width_convention", "contamination_threshold", "max_length"});
        if (s.has("platform")) rc.platform = s.string("platform");
        if (s.has("platform_file")) rc.platform_file = s.string("platform_file");
        s.maybe_quantity("pulse_fwhm", Dimension::Time, rc.pulse_fwhm);
        s.maybe_number("pump_photons", rc.pump_photons);
        s.maybe_number("pair_probability", rc.pair_probability);
        if (s.has("width_convention"))
            rc.width_convention = width_convention_from_string(s.string("width_convention"));
        s.maybe_number("contamination_threshold", rc.contamination_threshold);
        s.maybe_quantity("max_length", Dimension::Length, rc.max_length);
    }
    if (doc.contains("detector")) {
        const Section s(doc["detector"], "detector",
                        {"jitter_fwhm", "efficiency", "dead_time", "dark_count_rate"});
        s.maybe_quantity("jitter_fwhm", Dimension::Time, rc.jitter_fwhm);
        s.maybe_number("efficiency", rc.efficiency);
        s.maybe_quantity("dead_time", Dimension::Time, rc.dead_time);
        s.maybe_quantity("dark_count_rate", Dimension::Frequency, rc.dark_count_rate);
    }
    if (doc.contains("loop")) {
        const Section s(doc["loop"], "loop",
                        {"loop_delay", "trigger_delay", "rep_rate", "bins", "tap_ratio", "loop_loss", "differential_delay",
                         "creation_probability", "pump_clicks_per_bin_scale", "source_pulse_fwhm",
                         "histogram_bin_width"});
        LoopConfig& l = rc.loop;
        s.maybe_quantity("loop_delay", Dimension::Time, l.loop_delay);
        s.maybe_quantity("trigger_delay", Dimension::Time, l.trigger_delay);
        s.maybe_quantity("rep_rate", Dimension::Frequency, l.rep_rate);
        if (s.has("bins")) {
            const double b = s.number("bins");
            if (b != std::floor(b) || b < 1 || b > 1e6) throw ConfigError("'loop.bins' must be a positive integer");
            l.bins = static_cast<int>(b);
        }
        s.maybe_number("tap_ratio", l.tap_ratio);
        s.maybe_quantity("loop_loss", Dimension::Attenuation, l.loop_loss_db);
        s.maybe_quantity("differential_delay", Dimension::Time, l.differential_delay);
        s.maybe_number("creation_probability", l.creation_probability);
        s.maybe_number("pump_clicks_per_bin_scale", l.pump_clicks_per_bin_scale);
        s.maybe_quantity("source_pulse_fwhm", Dimension::Time, l.source_pulse_fwhm);
        s.maybe_quantity("histogram_bin_width", Dimension::Time, l.histogram_bin_width);
    }
    if (doc.contains("output")) {
        const Section s(doc["output"], "output", {"path", "format"});
        if (s.has("path")) rc.output_path = s.string("path");
        if (s.has("format")) {
            const std::string f = s.string("format");
            if (f == "csv")
                rc.output_format = OutputFormat::CSV;
            else if (f == "json")
                rc.output_format = OutputFormat::JSON;
            else
                throw ConfigError("'output.format' must be \"csv\" or \"json\"");
        }
    }
    return rc;
}

} // namespace

RunConfig parse_run_config(const std::string& text, const std::string& source_name)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        rethrow_parse_error(e, text, source_name);
    }
    try {
        return from_json(doc);
    } catch (const json::exception& e) {
        throw ConfigError(source_name + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(source_name + ": " + e.what());
    }
}

RunConfig load_run_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(), path.string());
}

ScenarioConfig apply_scenario(const RunConfig& run, ScenarioConfig base)
{
    if (run.pulse_fwhm) base.pulse_fwhm = *run.pulse_fwhm;
    if (run.pump_photons) base.pump_photons = *run.pump_photons;
    if (run.pair_probability) base.pair_probability = *run.pair_probability;
    if (run.width_convention) base.width_convention = *run.width_convention;
    if (run.contamination_threshold) base.contamination_threshold = *run.contamination_threshold;
    if (run.max_length) base.max_length = *run.max_length;
    base.detector = apply_detector(run, base.detector);
    return base;
}

DetectorSpec apply_detector(const RunConfig& run, DetectorSpec base)
{
    if (run.jitter_fwhm) base.jitter_fwhm = *run.jitter_fwhm;
    if (run.efficiency) base.efficiency = *run.efficiency;
    if (run.dead_time) base.dead_time = *run.dead_time;
    if (run.dark_count_rate) base.dark_count_rate = *run.dark_count_rate;
    return base;
}

} // namespace pumpsep
