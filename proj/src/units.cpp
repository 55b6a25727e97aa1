#include "pumpsep/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "pumpsep/errors.hpp"

namespace pumpsep {

namespace {

struct Suffix {
    std::string_view name;
    int exponent; // power of ten
};

constexpr std::array kTimeSuffixes{Suffix{"fs", -15}, Suffix{"ps", -12}, Suffix{"ns", -9},
                                   Suffix{"us", -6},  Suffix{"ms", -3},  Suffix{"s", 0}};
constexpr std::array kLengthSuffixes{Suffix{"nm", -9}, Suffix{"um", -6}, Suffix{"mm", -3},
                                     Suffix{"cm", -2}, Suffix{"m", 0},   Suffix{"km", 3}};
constexpr std::array kFrequencySuffixes{Suffix{"Hz", 0}, Suffix{"kHz", 3}, Suffix{"MHz", 6},
                                        Suffix{"GHz", 9}};
constexpr std::array kAttenuationSuffixes{Suffix{"dB", 0}};

const char* dimension_name(Dimension dim)
{
    switch (dim) {
    case Dimension::Time: return "duration";
    case Dimension::Length: return "length";
    case Dimension::Frequency: return "frequency";
    case Dimension::Attenuation: return "attenuation";
    }
    return "quantity";
}

template <std::size_t N>
bool lookup(const std::array<Suffix, N>& table, std::string_view unit, int& exponent)
{
    for (const auto& s : table) {
        if (s.name == unit) {
            exponent = s.exponent;
            return true;
        }
    }
    return false;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

} // namespace

double parse_quantity(std::string_view text, Dimension dim)
{
    const std::string_view body = trim(text);
    const auto bad = [&](const std::string& why) {
        return ConfigError("invalid " + std::string(dimension_name(dim)) + " '" +
                           std::string(text) + "': " + why);
    };
    if (body.empty()) throw bad("empty value");

    double value = 0.0;
    const char* first = body.data();
    const char* last = body.data() + body.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) throw bad("expected a number followed by a unit");
    if (!std::isfinite(value)) throw bad("value is not finite");

    const std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));
    if (unit.empty()) throw bad("missing unit");

    int exponent = 0;
    bool ok = false;
    switch (dim) {
    case Dimension::Time: ok = lookup(kTimeSuffixes, unit, exponent); break;
    case Dimension::Length: ok = lookup(kLengthSuffixes, unit, exponent); break;
    case Dimension::Frequency: ok = lookup(kFrequencySuffixes, unit, exponent); break;
    case Dimension::Attenuation: ok = lookup(kAttenuationSuffixes, unit, exponent); break;
    }
    if (!ok) throw bad("unknown unit '" + std::string(unit) + "'");
    if (exponent == 0 || value == 0.0) return value;

    // Re-read with the unit folded into the exponent so "0.2 ns" rounds like 0.2e-9.
    std::string_view number(first, static_cast<std::size_t>(ptr - first));
    const std::size_t e = number.find_first_of("eE");
    if (e != std::string_view::npos) {
        int own = 0;
        std::from_chars(number.data() + e + 1 + (number[e + 1] == '+'), number.data() + number.size(), own);
        exponent += own;
        number = number.substr(0, e);
    }
    const std::string scaled = std::string(number) + "e" + std::to_string(exponent);
    double out = 0.0;
    std::from_chars(scaled.data(), scaled.data() + scaled.size(), out);
    return out;
}

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

} // namespace pumpsep
