#pragma once

#include <string>
#include <vector>

#include "eigsim/constants.hpp"

namespace eigsim {

// Physical inputs of one simulation point. Every rate, Rabi frequency and
// detuning is an angular frequency in rad/s; the MHz-based scenario format
// converts at the boundary (see config.hpp).
struct SystemParams {
    double gamma_a = 0.0;  // upper-state decay
    double gamma_ab = 0.0; // optical coherence decay
    double gamma_cb = 0.0; // ground coherence decay
    double rabi_p = 0.0;   // probe
    double rabi_c1 = 0.0;  // forward coupling
    double rabi_c2 = 0.0;  // backward coupling
    double delta_p = 0.0;  // probe detuning from |a>-|b>
    double delta_c = 0.0;  // coupling detuning from |a>-|c>
    double hyperfine_split = 0.0; // omega_ac - omega_ab
    double density = 0.0;  // atoms/m^3
    double length = 0.0;   // cell length, m
    double theta = 0.0;    // probe-coupling angle, rad
    double temperature = 0.0; // K
    double window_loss = 0.0; // single-window power loss, fraction in [0,1)
};

// Throws ConfigError on any violated invariant.
void validate(const SystemParams& p);

// Non-fatal checks, e.g. the weak-probe linearization Omega_p << Omega_c.
std::vector<std::string> lint(const SystemParams& p);

// Absolute frequencies and wavevectors. omega_ab is identified with
// 2*pi*c/wavelength; the coupling frequency keeps the full hyperfine offset
// so that k_p and k_c differ at the GHz scale.
struct DerivedFrequencies {
    double omega_p = 0.0;    // rad/s
    double omega_c = 0.0;    // rad/s
    double k_p = 0.0;        // rad/m
    double k_c = 0.0;        // rad/m
    double two_photon = 0.0; // delta = delta_p - delta_c, rad/s
};

DerivedFrequencies derive_frequencies(const SystemParams& p,
                                      const PhysicalConstants& c);

} // namespace eigsim
