#pragma once

#include <string>
#include <string_view>

namespace pumpsep {

inline constexpr double kSpeedOfLight = 2.99792458e8; // m/s, exact

namespace units {
inline constexpr double fs = 1e-15;
inline constexpr double ps = 1e-12;
inline constexpr double ns = 1e-9;
inline constexpr double us = 1e-6;
inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;
inline constexpr double mm = 1e-3;
inline constexpr double cm = 1e-2;
inline constexpr double km = 1e3;
} // namespace units

enum class Dimension { Time, Length, Frequency, Attenuation };

// Strict parse of a unit-suffixed literal such as "20ps", "90.08 mm", "125 kHz",
// "0.5 dB". Returns the value in SI (s, m, Hz) or dB. The suffix must belong to
// the requested dimension; a bare number is rejected.
//   Time:        fs ps ns us ms s
//   Length:      nm um mm cm m km
//   Frequency:   Hz kHz MHz GHz
//   Attenuation: dB
double parse_quantity(std::string_view text, Dimension dim);

inline double parse_duration(std::string_view text) { return parse_quantity(text, Dimension::Time); }
inline double parse_length(std::string_view text) { return parse_quantity(text, Dimension::Length); }

// Shortest round-trippable decimal rendering ("%.17g" trimmed).
std::string format_number(double value);

} // namespace pumpsep
