#pragma once

#include <array>
#include <optional>

#include "eigsim/lineshape.hpp"

namespace eigsim {

struct FieldProfiles {
    std::vector<double> z;      // m, uniform grid over [0, L]
    std::vector<cplx> forward;  // F(z), probe envelope
    std::vector<cplx> backward; // G(z), emission envelope
};

struct PropagationResult {
    double delta_k = 0.0;      // rad/m, signed residual mismatch
    double eta = 0.0;          // reflection efficiency, fraction
    double transmission = 0.0; // fraction
    std::array<cplx, 4> transfer_matrix{}; // row-major {M11, M12, M21, M22}
    std::optional<FieldProfiles> field_profiles;
};

// n_p = 1 + Re(chi_0)/2, shared by probe and emission.
double refractive_index(cplx chi0);

// dk = [2(omega_p cos(theta) - omega_c) + Re(chi_0) omega_p cos(theta)] / c,
// returned signed; the dispersive term can pull the intrinsic (negative)
// mismatch toward zero.
double phase_mismatch(const DerivedFrequencies& f, double theta, cplx chi0,
                      double speed_of_light = 299792458.0);

// Single-pass probe phase accumulated across the cell: k_p L Re(chi_0)/2.
double probe_phase_shift(cplx chi0, double k_p, double length);

// Contradirectional two-mode boundary-value problem
//   dF/dz =  i b F + i k+ G e^{+i dk z}
//   dG/dz = -i b G - i k- F e^{-i dk z},  F(0) = 1, G(L) = 0,
// with b = k_p chi_0 / 2, k+- = k_p chi_{+-1} / 2, solved via the
// constant-coefficient transfer matrix of the rotated envelopes.
// window_loss scales eta and transmission by (1 - loss)^2.
// profile_points > 0 additionally samples F, G on that many z points.
PropagationResult coupled_mode_transfer(cplx chi0, cplx chi_plus1,
                                        cplx chi_minus1, double delta_k,
                                        double k_p, double length,
                                        double window_loss = 0.0,
                                        int profile_points = 0);

// Convenience entry point for sweeps: phase_mismatch from chi_0, then the
// coupled-mode solve with the +-1 grating harmonics.
PropagationResult reflection_point(const SystemParams& p,
                                   const DerivedFrequencies& f,
                                   const SusceptibilityHarmonics& chi,
                                   const PhysicalConstants& c,
                                   bool apply_window_loss = true,
                                   int profile_points = 0);

} // namespace eigsim
