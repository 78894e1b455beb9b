#pragma once

#include "eigsim/lineshape.hpp"

namespace eigsim {

enum class VelocityScheme {
    gauss_hermite,
    uniform_trapezoid,
};

// Quadrature over the 1D Maxwell-Boltzmann velocity distribution. Only the
// longitudinal component enters the atomic response; the small crossing
// angle is kept in the phase matching, not here.
struct VelocityGrid {
    std::vector<double> nodes;   // m/s
    std::vector<double> weights; // normalized to sum 1
    VelocityScheme scheme = VelocityScheme::gauss_hermite;
    double most_probable_speed = 0.0; // u = sqrt(2 kB T / m)
};

// Gauss-Hermite nodes are mapped to velocity via v = u*x with the e^{-x^2}
// weight absorbed; uniform_trapezoid spans +-5u with explicit Gaussian
// weights, dense enough to resolve sub-Doppler structure.
VelocityGrid make_velocity_grid(double temperature, double mass, int order,
                                VelocityScheme scheme = VelocityScheme::gauss_hermite,
                                double boltzmann = 1.380649e-23);

// chi_n = sum_j weight_j chi_n(v_j), fixed summation order. Solver failures
// are rethrown with the offending velocity attached.
SusceptibilityHarmonics doppler_average(const SystemParams& p,
                                        const DerivedFrequencies& f,
                                        const PhysicalConstants& c,
                                        const VelocityGrid& grid, int n_max);

// Doubling truncation on the averaged harmonics, same criteria as
// auto_truncate.
SusceptibilityHarmonics doppler_average_auto(const SystemParams& p,
                                             const DerivedFrequencies& f,
                                             const PhysicalConstants& c,
                                             const VelocityGrid& grid,
                                             double tol, int n_cap = 512);

} // namespace eigsim
