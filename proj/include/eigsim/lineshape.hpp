#pragma once

#include <complex>
#include <span>
#include <vector>

#include "eigsim/params.hpp"

namespace eigsim {

using cplx = std::complex<double>;

// Truncated Fourier expansion of the steady-state coherences for a single
// atomic velocity. a(n) holds the ab coherence harmonic riding the spatial
// wavevector k_p - 2n*k_c, b(n) the cb harmonic at k_p - (2n+1)*k_c.
// Coupling Rabi amplitudes are treated as real and non-negative; constant
// field phases only rotate the harmonics globally and drop out of |eta|.
struct HarmonicSolution {
    int n_max = 0;
    std::vector<cplx> a_coeffs; // size 2*n_max+1, index n + n_max
    std::vector<cplx> b_coeffs; // same layout
    double velocity = 0.0;      // m/s
    double residual_norm = 0.0; // ||Ax-b|| / ||b|| on the truncated system
    double grating_wavevector = 0.0; // k_c of the expansion, rad/m

    const cplx& a(int n) const { return a_coeffs[static_cast<size_t>(n + n_max)]; }
    const cplx& b(int n) const { return b_coeffs[static_cast<size_t>(n + n_max)]; }
    cplx& a(int n) { return a_coeffs[static_cast<size_t>(n + n_max)]; }
    cplx& b(int n) { return b_coeffs[static_cast<size_t>(n + n_max)]; }
};

// Dimensionless susceptibility harmonics chi_n, n = -n_max..n_max.
struct SusceptibilityHarmonics {
    int n_max = 0;
    std::vector<cplx> chi;

    const cplx& operator()(int n) const {
        return chi[static_cast<size_t>(n + n_max)];
    }
    cplx& operator()(int n) { return chi[static_cast<size_t>(n + n_max)]; }
};

// Solves the steady-state harmonic recurrence
//   (gamma_ab - i*Dab_n) A_n = (i/2) Omega_p [n=0] + (i/2) Omega_c1 B_n
//                              + (i/2) Omega_c2 B_{n-1}
//   (gamma_cb - i*dcb_n) B_n = (i/2) Omega_c1 A_n + (i/2) Omega_c2 A_{n+1}
// with Doppler-shifted detunings
//   Dab_n = delta_p - (k_p - 2n*k_c) v,
//   dcb_n = delta - (k_p - (2n+1)*k_c) v,
// coefficients outside |n| <= n_max set to zero, as one banded complex
// linear system.
HarmonicSolution solve_harmonics(const SystemParams& p,
                                 const DerivedFrequencies& f, double velocity,
                                 int n_max);

// Closed-form Fourier solution at v = 0 (degenerate standing wave):
// with D0 = gamma_ab - i*delta_p + (Oc1^2 + Oc2^2)/(4(gamma_cb - i*delta))
// and  D1 = Oc1*Oc2/(2(gamma_cb - i*delta)),
//   sigma_ab(z) = (i/2) Omega_p / (D0 + D1 cos 2 k_c z),
//   A_n = (i/2) Omega_p q^{|n|} / sqrt(D0^2 - D1^2),
// where q = (sqrt(D0^2 - D1^2) - D0)/D1 on the branch with |q| < 1.
// n_max = 0 selects a truncation from the decay rate |q|.
HarmonicSolution analytic_harmonics_v0(const SystemParams& p,
                                       const DerivedFrequencies& f,
                                       int n_max = 0);

// chi_n = (2 N mu^2 / (eps0 hbar Omega_p)) * A_n. Independent of Omega_p by
// linearity of the weak-probe response.
SusceptibilityHarmonics susceptibility_from_harmonics(
    const HarmonicSolution& sol, const SystemParams& p,
    const PhysicalConstants& c);

// sigma(z) = sum_n A_n exp(-2 i n k_c z); the common exp(i k_p z) carrier is
// factored out.
std::vector<cplx> spatial_coherence(const HarmonicSolution& sol,
                                    std::span<const double> z_grid);

// Doubles n_max starting from 4 until the coefficient change between
// successive truncations drops below tol*|A_0| and the edge coefficients of
// the accepted solution are below tol*max_n|A_n|. Throws ConvergenceError
// when the next doubling would exceed n_cap.
HarmonicSolution auto_truncate(const SystemParams& p,
                               const DerivedFrequencies& f, double velocity,
                               double tol, int n_cap = 512);

} // namespace eigsim
