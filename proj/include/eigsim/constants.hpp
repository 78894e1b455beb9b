#pragma once

namespace eigsim {

// SI constants (CODATA 2018) plus the atomic defaults used throughout:
// the Cs D1 line. The dipole moment is an effective value that only scales
// the susceptibility linearly; override it in the scenario file if a
// different normalization is wanted.
struct PhysicalConstants {
    double speed_of_light = 299792458.0;           // m/s
    double reduced_planck = 1.054571817e-34;       // J s
    double vacuum_permittivity = 8.8541878128e-12; // F/m
    double boltzmann = 1.380649e-23;               // J/K
    double atom_mass = 2.2069469e-25;              // kg (133Cs)
    double dipole_moment = 2.7e-29;                // C m, effective Cs D1
    double wavelength = 894.6e-9;                  // m, Cs D1

    void validate() const; // throws ConfigError unless all strictly positive
};

} // namespace eigsim
