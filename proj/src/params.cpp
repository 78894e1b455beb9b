#include "eigsim/params.hpp"

#include <cmath>
#include <numbers>

#include "eigsim/errors.hpp"

namespace eigsim {

void PhysicalConstants::validate() const {
    const struct {
        const char* name;
        double value;
    } entries[] = {
        {"speed_of_light", speed_of_light},
        {"reduced_planck", reduced_planck},
        {"vacuum_permittivity", vacuum_permittivity},
        {"boltzmann", boltzmann},
        {"atom_mass", atom_mass},
        {"dipole_moment", dipole_moment},
        {"wavelength", wavelength},
    };
    for (const auto& e : entries) {
        if (!(e.value > 0.0) || !std::isfinite(e.value))
            throw ConfigError(std::string("constants.") + e.name +
                              " must be strictly positive");
    }
}

void validate(const SystemParams& p) {
    auto positive = [](const char* name, double v) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string(name) + " must be strictly positive");
    };
    positive("gamma_a", p.gamma_a);
    positive("gamma_ab", p.gamma_ab);
    positive("gamma_cb", p.gamma_cb);
    positive("length", p.length);
    positive("temperature", p.temperature);
    if (!(p.density >= 0.0) || !std::isfinite(p.density))
        throw ConfigError("density must be non-negative");
    auto non_negative = [](const char* name, double v) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ConfigError(std::string(name) + " must be non-negative");
    };
    non_negative("rabi_p", p.rabi_p);
    non_negative("rabi_c1", p.rabi_c1);
    non_negative("rabi_c2", p.rabi_c2);
    if (!(p.theta >= 0.0 && p.theta < std::numbers::pi / 2.0))
        throw ConfigError("theta must lie in [0, pi/2)");
    if (!(p.window_loss >= 0.0 && p.window_loss < 1.0))
        throw ConfigError("window_loss must lie in [0, 1)");
    for (double v : {p.delta_p, p.delta_c, p.hyperfine_split})
        if (!std::isfinite(v)) throw ConfigError("detunings must be finite");
}

std::vector<std::string> lint(const SystemParams& p) {
    std::vector<std::string> notes;
    const double coupling = std::max(p.rabi_c1, p.rabi_c2);
    if (coupling > 0.0 && p.rabi_p / coupling > 0.3) {
        notes.push_back(
            "rabi_p / max(rabi_c1, rabi_c2) exceeds 0.3; the weak-probe "
            "linearization may not hold");
    }
    return notes;
}

DerivedFrequencies derive_frequencies(const SystemParams& p,
                                      const PhysicalConstants& c) {
    const double omega_ab = 2.0 * std::numbers::pi * c.speed_of_light / c.wavelength;
    DerivedFrequencies f;
    f.omega_p = omega_ab + p.delta_p;
    f.omega_c = omega_ab + p.hyperfine_split + p.delta_c;
    f.k_p = f.omega_p / c.speed_of_light;
    f.k_c = f.omega_c / c.speed_of_light;
    f.two_photon = p.delta_p - p.delta_c;
    return f;
}

} // namespace eigsim
