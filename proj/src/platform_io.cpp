#include "pumpsep/platform_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "pumpsep/errors.hpp"

#ifndef PUMPSEP_DATA_DIR
#define PUMPSEP_DATA_DIR "data/platforms"
#endif

namespace pumpsep {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

const json& require(const json& obj, const std::string& key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(where + ": missing required key '" + key + "'");
    return *it;
}

double require_number(const json& obj, const std::string& key, const std::string& where)
{
    const json& v = require(obj, key, where);
    if (!v.is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
    return v.get<double>();
}

std::string require_string(const json& obj, const std::string& key, const std::string& where)
{
    const json& v = require(obj, key, where);
    if (!v.is_string()) throw ConfigError(where + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

nlohmann::ordered_json channel_to_json(const WaveChannel& ch)
{
    nlohmann::ordered_json j;
    j["wavelength_nm"] = ch.wavelength_nm;
    j["polarization"] = to_string(ch.polarization);
    j["group_index"] = ch.group_index;
    j["loss_db_per_cm"] = ch.loss_db_per_cm;
    return j;
}

WaveChannel channel_from_json(const json& j, const std::string& where)
{
    reject_unknown_keys(j, {"wavelength_nm", "polarization", "group_index", "loss_db_per_cm"}, where);
    WaveChannel ch;
    ch.wavelength_nm = require_number(j, "wavelength_nm", where);
    ch.polarization = polarization_from_string(require_string(j, "polarization", where));
    ch.group_index = require_number(j, "group_index", where);
    ch.loss_db_per_cm = require_number(j, "loss_db_per_cm", where);
    return ch;
}

std::size_t line_of_byte(const std::string& text, std::size_t byte)
{
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

} // namespace

void rethrow_parse_error(const json::parse_error& e, const std::string& text,
                         const std::string& source_name)
{
    throw ConfigError(source_name + ":" + std::to_string(line_of_byte(text, e.byte)) +
                      ": parse error: " + e.what());
}

nlohmann::ordered_json platform_to_json(const PlatformSpec& p)
{
    nlohmann::ordered_json j;
    j["name"] = p.name;
    j["process"] = to_string(p.process);
    j["pump"] = channel_to_json(p.pump);
    j["signal"] = channel_to_json(p.signal);
    if (p.idler) j["idler"] = channel_to_json(*p.idler);
    j["default_pump_photons"] = p.default_pump_photons;
    j["default_pair_probability"] = p.default_pair_probability;
    return j;
}

PlatformSpec platform_from_json(const json& doc)
{
    std::string where = "platform";
    if (doc.is_object() && doc.contains("name") && doc["name"].is_string())
        where += " '" + doc["name"].get<std::string>() + "'";
    reject_unknown_keys(doc,
                        {"name", "process", "pump", "signal", "idler", "default_pump_photons",
                         "default_pair_probability"},
                        where);
    PlatformSpec p;
    p.name = require_string(doc, "name", where);
    p.process = process_from_string(require_string(doc, "process", where));
    p.pump = channel_from_json(require(doc, "pump", where), where + " pump");
    p.signal = channel_from_json(require(doc, "signal", where), where + " signal");
    if (doc.contains("idler")) p.idler = channel_from_json(doc["idler"], where + " idler");
    if (doc.contains("default_pump_photons"))
        p.default_pump_photons = require_number(doc, "default_pump_photons", where);
    if (doc.contains("default_pair_probability"))
        p.default_pair_probability = require_number(doc, "default_pair_probability", where);
    validate_platform(p);
    return p;
}

std::vector<PlatformSpec> parse_platforms(const std::string& text, const std::string& source_name)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        rethrow_parse_error(e, text, source_name);
    }
    std::vector<PlatformSpec> out;
    try {
        if (doc.is_object() && doc.contains("platforms")) {
            reject_unknown_keys(doc, {"platforms"}, source_name);
            if (!doc["platforms"].is_array())
                throw ConfigError(source_name + ": 'platforms' must be an array");
            for (const auto& item : doc["platforms"]) out.push_back(platform_from_json(item));
        } else {
            out.push_back(platform_from_json(doc));
        }
    } catch (const json::exception& e) {
        throw ConfigError(source_name + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(source_name + ": " + e.what());
    }
    return out;
}

std::vector<PlatformSpec> load_platform_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open platform file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_platforms(buf.str(), path.string());
}

std::filesystem::path resolve_platform_file(const std::string& name)
{
    namespace fs = std::filesystem;
    const fs::path direct(name);
    if (fs::exists(direct)) return direct;
    std::vector<fs::path> dirs;
    if (const char* env = std::getenv(kPlatformPathEnv)) {
        std::stringstream ss(env);
        std::string dir;
        while (std::getline(ss, dir, ':'))
            if (!dir.empty()) dirs.emplace_back(dir);
    }
    dirs.emplace_back(PUMPSEP_DATA_DIR);
    if (!direct.is_absolute()) {
        for (const auto& d : dirs) {
            const fs::path candidate = d / direct;
            if (fs::exists(candidate)) return candidate;
        }
    }
    throw ConfigError("platform file '" + name + "' not found (searched the working directory, $" +
                      kPlatformPathEnv + " and " + PUMPSEP_DATA_DIR + ")");
}

} // namespace pumpsep
