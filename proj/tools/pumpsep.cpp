// pumpsep: dispersive pump filtering feasibility and fiber-loop emulation.
//
//   pumpsep platforms list [--file extra.json] [--json]
//   pumpsep separation --platform Ti:LN --jitter 20ps [--csv | --json]
//   pumpsep sweep --platform Ti:LN --from 4ps --to 20ps --step 4ps
//   pumpsep profile --platform Ti:LN --time 200ps --jitter 8ps
//   pumpsep loop-sim --trials 1000000 --seed 1 [--config loop.json]
//
// Exit codes: 0 success, 2 configuration/parse error, 3 solver/model error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "pumpsep/errors.hpp"
#include "pumpsep/feasibility.hpp"
#include "pumpsep/loop_emulator.hpp"
#include "pumpsep/platform_io.hpp"
#include "pumpsep/report.hpp"
#include "pumpsep/run_config.hpp"
#include "pumpsep/units.hpp"

using namespace pumpsep;

namespace {

struct Common {
    std::vector<std::string> platform_files;
    std::string config_path;
    std::string output;
    bool json = false;
};

struct ScenarioFlags {
    std::string platform;
    std::string jitter;
    std::string fwhm;
    std::optional<double> pump_photons;
    std::optional<double> pair_probability;
    std::string convention;
    std::optional<double> threshold;
    std::optional<double> efficiency;
    std::string max_length;
};

void add_common(CLI::App* cmd, Common& c, bool with_config)
{
    cmd->add_option("--file", c.platform_files, "Additional platform file (JSON); searched in $" +
                                                    std::string(kPlatformPathEnv));
    if (with_config) cmd->add_option("--config", c.config_path, "Run configuration file (JSON)");
    cmd->add_option("-o,--output", c.output, "Write output to this file instead of stdout");
    cmd->add_flag("--json", c.json, "Emit JSON instead of CSV");
}

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f, bool jitter)
{
    cmd->add_option("--platform", f.platform, "Platform name");
    if (jitter) cmd->add_option("--jitter", f.jitter, "Detector jitter FWHM, e.g. 20ps");
    cmd->add_option("--fwhm", f.fwhm, "Pulse FWHM, e.g. 1ps");
    cmd->add_option("--pump-photons", f.pump_photons, "Pump photons per pulse");
    cmd->add_option("--pair-probability", f.pair_probability, "Pair generation probability per pulse");
    cmd->add_option("--convention", f.convention, "sech2-exact | gaussian-equivalent | literal-product");
    cmd->add_option("--threshold", f.threshold, "Contamination threshold");
    cmd->add_option("--efficiency", f.efficiency, "Detector efficiency");
    cmd->add_option("--max-length", f.max_length, "Solver bracketing limit, e.g. 1000km");
}

RunConfig load_config(const Common& c)
{
    if (c.config_path.empty()) return {};
    return load_run_config(c.config_path);
}

PlatformRegistry build_registry(const Common& c, const RunConfig& rc)
{
    PlatformRegistry reg;
    std::vector<std::string> files = c.platform_files;
    if (rc.platform_file) files.push_back(*rc.platform_file);
    for (const auto& f : files)
        for (auto& p : load_platform_file(resolve_platform_file(f))) reg.add(std::move(p));
    return reg;
}

// Registry lookup, falling back to "<name>.json" on the platform search path.
PlatformSpec find_platform(PlatformRegistry& reg, const std::string& name)
{
    try {
        return reg.find(name);
    } catch (const NotFoundError&) {
        std::filesystem::path file;
        try {
            file = resolve_platform_file(name + ".json");
        } catch (const ConfigError&) {
            throw;
        }
        for (auto& p : load_platform_file(file)) reg.add(std::move(p));
        return reg.find(name);
    }
}

double nonnegative_duration(const std::string& text, const char* what)
{
    const double v = parse_duration(text);
    if (v < 0.0) throw ConfigError(std::string(what) + " must be >= 0");
    return v;
}

ScenarioConfig build_scenario(const PlatformSpec& platform, const ScenarioFlags& f, const RunConfig& rc)
{
    ScenarioConfig cfg = apply_scenario(rc, default_scenario(platform, 0.0));
    if (!f.jitter.empty()) cfg.detector.jitter_fwhm = nonnegative_duration(f.jitter, "jitter");
    if (!f.fwhm.empty()) cfg.pulse_fwhm = parse_duration(f.fwhm);
    if (f.pump_photons) cfg.pump_photons = *f.pump_photons;
    if (f.pair_probability) cfg.pair_probability = *f.pair_probability;
    if (!f.convention.empty()) cfg.width_convention = width_convention_from_string(f.convention);
    if (f.threshold) cfg.contamination_threshold = *f.threshold;
    if (f.efficiency) cfg.detector.efficiency = *f.efficiency;
    if (!f.max_length.empty()) cfg.max_length = parse_length(f.max_length);
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::string platform_name(const ScenarioFlags& f, const RunConfig& rc)
{
    if (!f.platform.empty()) return f.platform;
    if (rc.platform) return *rc.platform;
    throw ConfigError("--platform is required");
}

// Writes to --output (or the config's output path) or stdout.
class Sink {
public:
    Sink(const Common& c, const RunConfig& rc)
    {
        std::string path = c.output;
        if (path.empty() && rc.output_path) path = *rc.output_path;
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw ConfigError("cannot write '" + path + "'");
        }
    }
    std::ostream& out() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

bool want_json(const Common& c, const RunConfig& rc) { return c.json || rc.output_format == OutputFormat::JSON; }
bool want_csv(bool flag, const RunConfig& rc) { return flag || rc.output_format == OutputFormat::CSV; }

int cmd_platforms(const Common& c)
{
    const RunConfig rc;
    PlatformRegistry reg = build_registry(c, rc);
    Sink sink(c, rc);
    if (c.json) {
        nlohmann::ordered_json doc;
        doc["platforms"] = nlohmann::ordered_json::array();
        for (const auto& p : reg.all()) doc["platforms"].push_back(platform_to_json(p));
        sink.out() << doc.dump(2) << '\n';
    } else {
        write_platforms_csv(sink.out(), reg.all());
    }
    return 0;
}

int cmd_separation(const Common& c, const ScenarioFlags& f, bool csv)
{
    const RunConfig rc = load_config(c);
    PlatformRegistry reg = build_registry(c, rc);
    const PlatformSpec platform = find_platform(reg, platform_name(f, rc));
    const ScenarioConfig cfg = build_scenario(platform, f, rc);
    const SeparationResult r = solve_separation_distance(cfg);
    Sink sink(c, rc);
    if (want_json(c, rc))
        sink.out() << separation_json(platform.name, cfg.detector.jitter_fwhm, r).dump(2) << '\n';
    else if (want_csv(csv, rc))
        write_separation_csv(sink.out(), platform.name, cfg.detector.jitter_fwhm, r);
    else
        write_separation_text(sink.out(), platform.name, cfg.detector.jitter_fwhm, r);
    return 0;
}

struct SweepFlags {
    std::vector<std::string> platforms;
    std::string from = "4ps";
    std::string to = "20ps";
    std::string step = "4ps";
    std::string output_dir;
};

std::vector<double> jitter_range(const SweepFlags& s)
{
    const double from = nonnegative_duration(s.from, "jitter");
    const double to = nonnegative_duration(s.to, "jitter");
    const double step = parse_duration(s.step);
    if (!(step > 0.0)) throw ConfigError("jitter step must be > 0");
    if (to < from) throw ConfigError("empty jitter range: --to is below --from");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((to - from) / step * (1.0 + 1e-12) + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(from + static_cast<double>(i) * step);
    return out;
}

int cmd_sweep(const Common& c, const ScenarioFlags& f, const SweepFlags& s)
{
    const RunConfig rc = load_config(c);
    PlatformRegistry reg = build_registry(c, rc);
    std::vector<std::string> names = s.platforms;
    if (names.empty()) names.push_back(platform_name(f, rc));
    if (names.size() == 1 && names.front() == "all") {
        names.clear();
        for (const auto& p : builtin_platforms()) names.push_back(p.name);
    }
    if (names.size() > 1 && s.output_dir.empty())
        throw ConfigError("several platforms need --output-dir (one CSV per platform)");
    const std::vector<double> jitters = jitter_range(s);

    bool any_ok = false;
    for (const auto& name : names) {
        const PlatformSpec platform = find_platform(reg, name);
        const ScenarioConfig cfg = build_scenario(platform, f, rc);
        const auto rows = jitter_sweep(cfg, jitters);
        for (const auto& r : rows) any_ok = any_ok || r.result.has_value();

        std::unique_ptr<std::ofstream> file;
        std::ostream* out = &std::cout;
        if (!s.output_dir.empty()) {
            std::filesystem::create_directories(s.output_dir);
            std::string stem = name;
            for (char& ch : stem)
                if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
            const auto path = std::filesystem::path(s.output_dir) /
                              ("sweep_" + stem + (want_json(c, rc) ? ".json" : ".csv"));
            file = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file) throw ConfigError("cannot write '" + path.string() + "'");
            out = file.get();
        } else if (!c.output.empty()) {
            file = std::make_unique<std::ofstream>(c.output, std::ios::binary);
            if (!*file) throw ConfigError("cannot write '" + c.output + "'");
            out = file.get();
        }
        if (want_json(c, rc))
            *out << sweep_json(rows).dump(2) << '\n';
        else
            write_sweep_csv(*out, rows);
    }
    return any_ok ? 0 : 3;
}

int cmd_profile(const Common& c, const ScenarioFlags& f, const std::string& length, const std::string& time)
{
    const RunConfig rc = load_config(c);
    PlatformRegistry reg = build_registry(c, rc);
    const PlatformSpec platform = find_platform(reg, platform_name(f, rc));
    const ScenarioConfig cfg = build_scenario(platform, f, rc);
    if (length.empty() == time.empty()) throw ConfigError("give exactly one of --length or --time");
    double l = 0.0;
    if (!length.empty()) {
        l = parse_length(length);
        if (l < 0.0) throw ConfigError("length must be >= 0");
    } else {
        // propagation time of the signal pulse
        l = nonnegative_duration(time, "time") * kSpeedOfLight / platform.signal.group_index;
    }
    const DistanceProfile profile = profile_at_distance(cfg, l);
    Sink sink(c, rc);
    write_profile_csv(sink.out(), profile);
    return 0;
}

struct LoopFlags {
    std::int64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    std::string jitter;
    std::string differential_delay;
};

int cmd_loop_sim(const Common& c, const LoopFlags& lf)
{
    const RunConfig rc = load_config(c);
    if (lf.trials < 1) throw ConfigError("trials must be >= 1");
    LoopConfig loop = rc.loop;
    if (!lf.differential_delay.empty()) loop.differential_delay = parse_duration(lf.differential_delay);
    DetectorSpec det = apply_detector(rc, default_loop_detector());
    if (!lf.jitter.empty()) det.jitter_fwhm = nonnegative_duration(lf.jitter, "jitter");
    try {
        det.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    const HistogramResult r = run_emulation(loop, det, static_cast<std::uint64_t>(lf.trials), lf.seed);
    Sink sink(c, rc);
    if (want_json(c, rc)) {
        auto j = histogram_json(r);
        try {
            j["first_separated_round_trip"] = first_separated_round_trip(r, det);
        } catch (const ModelError& e) {
            j["first_separated_round_trip"] = nullptr;
        }
        sink.out() << j.dump(2) << '\n';
    } else {
        write_histogram_csv(sink.out(), r);
    }
    try {
        std::cerr << "first separated round trip: " << first_separated_round_trip(r, det) << '\n';
    } catch (const ModelError& e) {
        std::cerr << "warning: " << e.what() << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dispersive pump filtering: separation distances, density profiles and fiber-loop emulation"};
    app.require_subcommand(1);

    Common common;
    ScenarioFlags scenario;

    auto* platforms = app.add_subcommand("platforms", "Platform registry");
    auto* list = platforms->add_subcommand("list", "List built-in and loaded platforms");
    platforms->require_subcommand(1);
    add_common(list, common, false);

    bool csv = false;
    auto* separation = app.add_subcommand("separation", "Solve the minimum separation distance");
    add_common(separation, common, true);
    add_scenario_flags(separation, scenario, true);
    separation->add_flag("--csv", csv, "One header line and one data row");

    SweepFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "Separation distance over a jitter range");
    add_common(sweep, common, true);
    add_scenario_flags(sweep, scenario, false);
    sweep->remove_option(sweep->get_option("--platform"));
    sweep->add_option("--platform", sweep_flags.platforms, "Platform name (repeatable, or 'all')");
    sweep->add_option("--from", sweep_flags.from, "First jitter FWHM")->capture_default_str();
    sweep->add_option("--to", sweep_flags.to, "Last jitter FWHM")->capture_default_str();
    sweep->add_option("--step", sweep_flags.step, "Jitter step")->capture_default_str();
    sweep->add_option("--output-dir", sweep_flags.output_dir, "Write one CSV per platform here");

    std::string length, time;
    auto* profile = app.add_subcommand("profile", "Photon, cumulative and jittered click densities");
    add_common(profile, common, true);
    add_scenario_flags(profile, scenario, true);
    profile->add_option("--length", length, "Propagation length, e.g. 27mm");
    profile->add_option("--time", time, "Signal propagation time, e.g. 200ps");

    LoopFlags loop_flags;
    auto* loop = app.add_subcommand("loop-sim", "Monte Carlo fiber-loop emulation");
    add_common(loop, common, true);
    loop->add_option("--trials", loop_flags.trials, "Laser triggers to simulate")->capture_default_str();
    loop->add_option("--seed", loop_flags.seed, "Random seed")->capture_default_str();
    loop->add_option("--jitter", loop_flags.jitter, "Detector system jitter FWHM");
    loop->add_option("--differential-delay", loop_flags.differential_delay, "Pump-signal delay per round trip");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (list->parsed()) return cmd_platforms(common);
        if (separation->parsed()) return cmd_separation(common, scenario, csv);
        if (sweep->parsed()) return cmd_sweep(common, scenario, sweep_flags);
        if (profile->parsed()) return cmd_profile(common, scenario, length, time);
        if (loop->parsed()) return cmd_loop_sim(common, loop_flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        const int code = exit_code_for(e);
        return code == 1 ? 3 : code;
    }
    return 0;
}
