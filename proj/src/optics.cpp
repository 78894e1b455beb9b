#include "eigsim/optics.hpp"

#include <cmath>

#include "eigsim/errors.hpp"

namespace eigsim {

namespace {

// exp(K z) for the trace-free generator K = [[g, c12], [c21, -g]] in closed
// form: cosh(qz) I + sinh(qz)/q K with q^2 = g^2 + c12 c21.
std::array<cplx, 4> generator_exp(cplx g, cplx c12, cplx c21, double z) {
    const cplx q2 = g * g + c12 * c21;
    const cplx q = std::sqrt(q2);
    const cplx qz = q * z;
    cplx ch, shq; // cosh(qz), sinh(qz)/q
    if (std::abs(qz) < 1e-6) {
        // series limit, sinh(qz)/q -> z as q -> 0
        ch = 1.0 + 0.5 * qz * qz;
        shq = z * (1.0 + qz * qz / 6.0);
    } else {
        ch = std::cosh(qz);
        shq = std::sinh(qz) / q;
    }
    return {ch + shq * g, shq * c12, shq * c21, ch - shq * g};
}

} // namespace

double refractive_index(cplx chi0) { return 1.0 + 0.5 * chi0.real(); }

double phase_mismatch(const DerivedFrequencies& f, double theta, cplx chi0,
                      double speed_of_light) {
    const double ct = std::cos(theta);
    return (2.0 * (f.omega_p * ct - f.omega_c) + chi0.real() * f.omega_p * ct) /
           speed_of_light;
}

double probe_phase_shift(cplx chi0, double k_p, double length) {
    return 0.5 * k_p * length * chi0.real();
}

PropagationResult coupled_mode_transfer(cplx chi0, cplx chi_plus1,
                                        cplx chi_minus1, double delta_k,
                                        double k_p, double length,
                                        double window_loss,
                                        int profile_points) {
    if (!(length > 0.0)) throw ConfigError("cell length must be positive");

    const cplx beta = 0.5 * k_p * chi0;
    const cplx kappa_p = 0.5 * k_p * chi_plus1;
    const cplx kappa_m = 0.5 * k_p * chi_minus1;
    const cplx i{0.0, 1.0};

    // Rotated envelopes u = F e^{-i dk z/2}, w = G e^{+i dk z/2} obey
    // (u, w)' = K (u, w) with a z-independent K.
    const cplx g = i * (beta - 0.5 * delta_k);
    const cplx c12 = i * kappa_p;
    const cplx c21 = -i * kappa_m;

    const std::array<cplx, 4> M = generator_exp(g, c12, c21, length);
    if (std::abs(M[3]) < 1e-12)
        throw NumericalError(
            "transfer matrix at the self-oscillation threshold (|M22| ~ 0); "
            "inputs are outside the passive regime");

    const cplx w0 = -M[2] / M[3];       // G(0) in the rotated frame
    const cplx uL = M[0] + M[1] * w0;   // F(L) likewise

    PropagationResult out;
    out.delta_k = delta_k;
    out.transfer_matrix = M;
    const double loss_factor = (1.0 - window_loss) * (1.0 - window_loss);
    out.eta = std::norm(w0) * loss_factor;
    out.transmission = std::norm(uL) * loss_factor;
    if (!std::isfinite(out.eta) || !std::isfinite(out.transmission))
        throw NumericalError("coupled-mode transfer produced non-finite power");

    if (profile_points > 1) {
        FieldProfiles prof;
        prof.z.resize(static_cast<size_t>(profile_points));
        prof.forward.resize(prof.z.size());
        prof.backward.resize(prof.z.size());
        for (int j = 0; j < profile_points; ++j) {
            const double z = length * j / (profile_points - 1);
            const std::array<cplx, 4> Mz = generator_exp(g, c12, c21, z);
            const cplx u = Mz[0] + Mz[1] * w0;
            const cplx w = Mz[2] + Mz[3] * w0;
            prof.z[static_cast<size_t>(j)] = z;
            prof.forward[static_cast<size_t>(j)] =
                u * std::polar(1.0, 0.5 * delta_k * z);
            prof.backward[static_cast<size_t>(j)] =
                w * std::polar(1.0, -0.5 * delta_k * z);
        }
        out.field_profiles = std::move(prof);
    }
    return out;
}

PropagationResult reflection_point(const SystemParams& p,
                                   const DerivedFrequencies& f,
                                   const SusceptibilityHarmonics& chi,
                                   const PhysicalConstants& c,
                                   bool apply_window_loss,
                                   int profile_points) {
    if (chi.n_max < 1)
        throw ConfigError("reflection_point needs harmonics up to |n| = 1");
    const double dk = phase_mismatch(f, p.theta, chi(0), c.speed_of_light);
    return coupled_mode_transfer(chi(0), chi(1), chi(-1), dk, f.k_p, p.length,
                                 apply_window_loss ? p.window_loss : 0.0,
                                 profile_points);
}

} // namespace eigsim
