#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pumpsep {

enum class Process { SPDC, SFWM };
enum class Polarization { TE, TM };

std::string to_string(Process p);
std::string to_string(Polarization p);
Process process_from_string(const std::string& s);
Polarization polarization_from_string(const std::string& s);

// One propagating field. Wavelength in nm and loss in dB/cm, as tabulated;
// everything else in the library is SI.
struct WaveChannel {
    double wavelength_nm = 0.0;
    Polarization polarization = Polarization::TE;
    double group_index = 1.0;
    double loss_db_per_cm = 0.0;

    bool operator==(const WaveChannel&) const = default;
};

struct PlatformSpec {
    std::string name;
    Process process = Process::SPDC;
    WaveChannel pump;
    WaveChannel signal;
    std::optional<WaveChannel> idler;
    double default_pump_photons = 1e9;
    double default_pair_probability = 0.1;

    double delta_group_index() const { return pump.group_index - signal.group_index; }

    bool operator==(const PlatformSpec&) const = default;
};

// Rejects non-physical channels and platforms where the signal does not lead
// the pump (equal or inverted group indices).
void validate_platform(const PlatformSpec& platform);

// The four integrated platforms evaluated for dispersive pump filtering:
// SoI and SiN (SFWM), Ti:LN and TFLN (SPDC).
const std::vector<PlatformSpec>& builtin_platforms();

// SoI with the loss implied by the quoted 72.71 dB over 26.928 m.
PlatformSpec soi_text_consistent_platform();

// Registry of built-ins plus user-loaded platforms; lookup by name.
class PlatformRegistry {
public:
    PlatformRegistry();

    // Adds or replaces by name after validation.
    void add(PlatformSpec platform);
    const PlatformSpec& find(const std::string& name) const;
    const std::vector<PlatformSpec>& all() const { return platforms_; }

private:
    std::vector<PlatformSpec> platforms_;
};

// Sellmeier dispersion n^2 = 1 + sum B_i l^2 / (l^2 - C_i), l in um, C_i in um^2.
struct SellmeierModel {
    std::string name;
    std::vector<std::pair<double, double>> terms; // (B_i, C_i)
    double min_wavelength_um = 0.0;
    double max_wavelength_um = 0.0;
};

// Malitson 1965 fused silica, 0.21 - 3.71 um.
SellmeierModel fused_silica();
// Luke et al. 2015 stoichiometric Si3N4, 0.31 - 5.504 um.
SellmeierModel silicon_nitride();

// Wavelength in metres.
double sellmeier_index(const SellmeierModel& model, double wavelength);
// dn/dlambda in 1/m, analytic.
double sellmeier_dn_dlambda(const SellmeierModel& model, double wavelength);
// n_g = n - lambda dn/dlambda
double group_index(const SellmeierModel& model, double wavelength);

// tau = L (n_g,P - n_g,S) / c. Positive when the signal arrives first.
double arrival_separation(double length, const PlatformSpec& platform);

double propagation_loss_db(double length, const WaveChannel& channel);

// mu * 10^(-loss_db/10)
double attenuate(double mu, double loss_db);

} // namespace pumpsep
