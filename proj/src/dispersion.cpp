#include "pumpsep/dispersion.hpp"

#include <algorithm>
#include <cmath>

#include "pumpsep/errors.hpp"
#include "pumpsep/units.hpp"

namespace pumpsep {

std::string to_string(Process p) { return p == Process::SPDC ? "SPDC" : "SFWM"; }
std::string to_string(Polarization p) { return p == Polarization::TE ? "TE" : "TM"; }

Process process_from_string(const std::string& s)
{
    if (s == "SPDC") return Process::SPDC;
    if (s == "SFWM") return Process::SFWM;
    throw ConfigError("unknown process '" + s + "' (expected SPDC or SFWM)");
}

Polarization polarization_from_string(const std::string& s)
{
    if (s == "TE") return Polarization::TE;
    if (s == "TM") return Polarization::TM;
    throw ConfigError("unknown polarization '" + s + "' (expected TE or TM)");
}

namespace {

void validate_channel(const WaveChannel& ch, const std::string& where)
{
    if (!(ch.wavelength_nm > 0.0) || !std::isfinite(ch.wavelength_nm))
        throw ConfigError(where + ": wavelength must be > 0");
    if (!(ch.group_index >= 1.0) || !std::isfinite(ch.group_index))
        throw ConfigError(where + ": group index must be >= 1");
    if (!(ch.loss_db_per_cm >= 0.0) || !std::isfinite(ch.loss_db_per_cm))
        throw ConfigError(where + ": loss must be >= 0");
}

PlatformSpec make_platform(std::string name, Process process, WaveChannel pump, WaveChannel signal)
{
    PlatformSpec p;
    p.name = std::move(name);
    p.process = process;
    p.pump = pump;
    p.signal = signal;
    p.default_pump_photons = 1e9;
    p.default_pair_probability = 0.1;
    return p;
}

} // namespace

void validate_platform(const PlatformSpec& platform)
{
    if (platform.name.empty()) throw ConfigError("platform name must not be empty");
    const std::string where = "platform '" + platform.name + "'";
    validate_channel(platform.pump, where + " pump");
    validate_channel(platform.signal, where + " signal");
    if (platform.idler) validate_channel(*platform.idler, where + " idler");
    if (platform.signal.group_index == platform.pump.group_index)
        throw ConfigError(where + ": signal and pump group indices are equal, the pulses never separate");
    if (platform.signal.group_index > platform.pump.group_index)
        throw ConfigError(where + ": signal group index exceeds the pump's; anomalous dispersion "
                                  "(signal trailing the pump) is not supported");
    if (!(platform.default_pump_photons >= 1.0))
        throw ConfigError(where + ": default_pump_photons must be >= 1");
    if (!(platform.default_pair_probability > 0.0 && platform.default_pair_probability < 1.0))
        throw ConfigError(where + ": default_pair_probability must lie in (0, 1)");
}

const std::vector<PlatformSpec>& builtin_platforms()
{
    using P = Polarization;
    // Ti:LN pump loss at 775 nm is not tabulated; the 1550 nm value is reused.
    static const std::vector<PlatformSpec> platforms = {
        make_platform("SoI", Process::SFWM, {1550, P::TE, 1.4626, 0.1}, {1202, P::TE, 1.4617, 0.1}),
        make_platform("SiN", Process::SFWM, {1540, P::TE, 2.0396, 0.00045},
                      {1600, P::TE, 2.0395, 0.00045}),
        make_platform("Ti:LN", Process::SPDC, {775, P::TE, 2.369, 0.03}, {1550, P::TM, 2.187, 0.03}),
        make_platform("TFLN", Process::SPDC, {775, P::TE, 2.331, 0.27}, {1550, P::TE, 2.270, 0.27}),
    };
    return platforms;
}

PlatformSpec soi_text_consistent_platform()
{
    PlatformSpec p = builtin_platforms().front();
    p.name = "soi-text-consistent";
    p.pump.loss_db_per_cm = 0.027;
    p.signal.loss_db_per_cm = 0.027;
    return p;
}

PlatformRegistry::PlatformRegistry() : platforms_(builtin_platforms()) {}

void PlatformRegistry::add(PlatformSpec platform)
{
    validate_platform(platform);
    auto it = std::find_if(platforms_.begin(), platforms_.end(),
                           [&](const PlatformSpec& p) { return p.name == platform.name; });
    if (it != platforms_.end())
        *it = std::move(platform);
    else
        platforms_.push_back(std::move(platform));
}

const PlatformSpec& PlatformRegistry::find(const std::string& name) const
{
    for (const auto& p : platforms_)
        if (p.name == name) return p;
    std::string known;
    for (const auto& p : platforms_) known += (known.empty() ? "" : ", ") + p.name;
    throw NotFoundError("unknown platform '" + name + "' (known: " + known + ")");
}

SellmeierModel fused_silica()
{
    return {"fused silica",
            {{0.6961663, 0.0684043 * 0.0684043},
             {0.4079426, 0.1162414 * 0.1162414},
             {0.8974794, 9.896161 * 9.896161}},
            0.21,
            3.71};
}

SellmeierModel silicon_nitride()
{
    return {"Si3N4", {{3.0249, 0.1353406 * 0.1353406}, {40314.0, 1239.842 * 1239.842}}, 0.31, 5.504};
}

namespace {

double to_um_checked(const SellmeierModel& model, double wavelength)
{
    const double um = wavelength / units::um;
    if (!(um >= model.min_wavelength_um && um <= model.max_wavelength_um))
        throw DomainError("wavelength " + format_number(um) + " um outside the " + model.name +
                          " Sellmeier range [" + format_number(model.min_wavelength_um) + ", " +
                          format_number(model.max_wavelength_um) + "] um");
    for (const auto& [b, c] : model.terms)
        if (std::abs(um * um - c) < 1e-12 * std::max(1.0, c))
            throw DomainError("wavelength sits on a Sellmeier pole of " + model.name);
    return um;
}

double index_at_um(const SellmeierModel& model, double um)
{
    const double l2 = um * um;
    double n2 = 1.0;
    for (const auto& [b, c] : model.terms) n2 += b * l2 / (l2 - c);
    if (!(n2 > 1.0)) throw DomainError("Sellmeier model " + model.name + " gives n^2 <= 1");
    return std::sqrt(n2);
}

} // namespace

double sellmeier_index(const SellmeierModel& model, double wavelength)
{
    return index_at_um(model, to_um_checked(model, wavelength));
}

double sellmeier_dn_dlambda(const SellmeierModel& model, double wavelength)
{
    const double um = to_um_checked(model, wavelength);
    const double n = index_at_um(model, um);
    const double l2 = um * um;
    double s = 0.0;
    for (const auto& [b, c] : model.terms) {
        const double d = l2 - c;
        s += b * c * um / (d * d);
    }
    return -s / n / units::um; // per um -> per m
}

double group_index(const SellmeierModel& model, double wavelength)
{
    return sellmeier_index(model, wavelength) - wavelength * sellmeier_dn_dlambda(model, wavelength);
}

double arrival_separation(double length, const PlatformSpec& platform)
{
    if (!(length >= 0.0)) throw DomainError("length must be >= 0");
    return length * platform.delta_group_index() / kSpeedOfLight;
}

double propagation_loss_db(double length, const WaveChannel& channel)
{
    if (!(length >= 0.0)) throw DomainError("length must be >= 0");
    return channel.loss_db_per_cm * (length / units::cm);
}

double attenuate(double mu, double loss_db)
{
    if (!(mu >= 0.0)) throw DomainError("mean photon number must be >= 0");
    if (!(loss_db >= 0.0)) throw DomainError("loss must be >= 0 dB");
    return mu * std::pow(10.0, -loss_db / 10.0);
}

} // namespace pumpsep
