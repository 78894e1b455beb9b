#include "eigsim/lineshape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <lapacke.h>

#include "eigsim/errors.hpp"

namespace eigsim {

namespace {

constexpr cplx kHalfI{0.0, 0.5};

// Per-harmonic complex dampings of the interleaved unknown vector
// x = [A_{-N}, B_{-N}, A_{-N+1}, B_{-N+1}, ..., A_N, B_N].
struct Recurrence {
    int n_max;
    double gamma_ab, gamma_cb;
    double delta_p, delta;
    double k_p, k_c, v;
    cplx hp;  // (i/2) Omega_p
    cplx hc1; // (i/2) Omega_c1
    cplx hc2; // (i/2) Omega_c2

    cplx diag_a(int n) const {
        const double shift = (k_p - 2.0 * n * k_c) * v;
        return {gamma_ab, -(delta_p - shift)};
    }
    cplx diag_b(int n) const {
        const double shift = (k_p - (2.0 * n + 1.0) * k_c) * v;
        return {gamma_cb, -(delta - shift)};
    }
};

Recurrence make_recurrence(const SystemParams& p, const DerivedFrequencies& f,
                           double velocity, int n_max) {
    return Recurrence{
        n_max,          p.gamma_ab,     p.gamma_cb,
        p.delta_p,      f.two_photon,   f.k_p,
        f.k_c,          velocity,       kHalfI * p.rabi_p,
        kHalfI * p.rabi_c1, kHalfI * p.rabi_c2,
    };
}

// The B harmonics ride half-integer grating positions (wavevector
// k_p - (2n+1) k_c), so the symmetric truncation keeps A_n for |n| <= N and
// B_n for -N <= n <= N-1. Interleaved as [A_{-N}, B_{-N}, A_{-N+1}, ...,
// B_{N-1}, A_N] the operator is tridiagonal, and for equal coupling
// amplitudes at v = 0 it is exactly reflection-symmetric, preserving
// A_n = A_{-n}.
int a_index(int n, int n_max) { return 2 * (n + n_max); }
int b_index(int n, int n_max) { return 2 * (n + n_max) + 1; }

// y = A x for the truncated operator, using the recurrence stencil.
void apply_operator(const Recurrence& r, const std::vector<cplx>& x,
                    std::vector<cplx>& y) {
    const int N = r.n_max;
    const auto A = [&](int n) -> cplx {
        return (n < -N || n > N) ? cplx{}
                                 : x[static_cast<size_t>(a_index(n, N))];
    };
    const auto B = [&](int n) -> cplx {
        return (n < -N || n > N - 1) ? cplx{}
                                     : x[static_cast<size_t>(b_index(n, N))];
    };
    y.assign(x.size(), cplx{});
    for (int n = -N; n <= N; ++n)
        y[static_cast<size_t>(a_index(n, N))] =
            r.diag_a(n) * A(n) - r.hc1 * B(n) - r.hc2 * B(n - 1);
    for (int n = -N; n <= N - 1; ++n)
        y[static_cast<size_t>(b_index(n, N))] =
            r.diag_b(n) * B(n) - r.hc1 * A(n) - r.hc2 * A(n + 1);
}

double norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

// Banded LU solve (kl = ku = 1) via LAPACK, with one step of iterative
// refinement so the residual invariant holds even for strongly coupled,
// badly scaled systems.
void solve_banded(const Recurrence& r, std::vector<cplx>& x,
                  double& residual_norm) {
    const int N = r.n_max;
    const lapack_int n = 4 * N + 1;
    const lapack_int kl = 1, ku = 1;
    const lapack_int ldab = 2 * kl + ku + 1;

    std::vector<cplx> ab(static_cast<size_t>(ldab) * n, cplx{});
    auto entry = [&](lapack_int i, lapack_int j) -> cplx& {
        return ab[static_cast<size_t>(j) * ldab + (kl + ku + i - j)];
    };
    for (int nn = -N; nn <= N; ++nn) {
        const lapack_int ra = a_index(nn, N);
        entry(ra, ra) = r.diag_a(nn);
        if (nn <= N - 1) entry(ra, ra + 1) = -r.hc1; // B_n
        if (nn - 1 >= -N) entry(ra, ra - 1) = -r.hc2; // B_{n-1}
    }
    for (int nn = -N; nn <= N - 1; ++nn) {
        const lapack_int rb = b_index(nn, N);
        entry(rb, rb) = r.diag_b(nn);
        entry(rb, rb - 1) = -r.hc1; // A_n
        entry(rb, rb + 1) = -r.hc2; // A_{n+1}
    }

    std::vector<cplx> b(static_cast<size_t>(n), cplx{});
    b[static_cast<size_t>(a_index(0, N))] = r.hp; // drive enters the A_0 row
    const double bnorm = norm2(b);

    std::vector<lapack_int> ipiv(static_cast<size_t>(n));
    lapack_int info = LAPACKE_zgbtrf(
        LAPACK_COL_MAJOR, n, n, kl, ku,
        reinterpret_cast<lapack_complex_double*>(ab.data()), ldab, ipiv.data());
    if (info != 0)
        throw NumericalError("harmonic system is singular (zgbtrf info=" +
                             std::to_string(info) + ")");

    x = b;
    auto back_solve = [&](std::vector<cplx>& rhs) {
        lapack_int st = LAPACKE_zgbtrs(
            LAPACK_COL_MAJOR, 'N', n, kl, ku, 1,
            reinterpret_cast<const lapack_complex_double*>(ab.data()), ldab,
            ipiv.data(), reinterpret_cast<lapack_complex_double*>(rhs.data()),
            n);
        if (st != 0)
            throw NumericalError("banded back-substitution failed");
    };
    back_solve(x);

    std::vector<cplx> y, res(static_cast<size_t>(n));
    for (int pass = 0; pass < 2; ++pass) {
        apply_operator(r, x, y);
        for (lapack_int i = 0; i < n; ++i)
            res[static_cast<size_t>(i)] = b[static_cast<size_t>(i)] - y[static_cast<size_t>(i)];
        residual_norm = bnorm > 0.0 ? norm2(res) / bnorm : norm2(res);
        if (residual_norm < 1e-14 || pass == 1) break;
        back_solve(res);
        for (lapack_int i = 0; i < n; ++i)
            x[static_cast<size_t>(i)] += res[static_cast<size_t>(i)];
    }

    for (const cplx& z : x)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NumericalError("NaN propagated through the harmonic solve");
}

} // namespace

HarmonicSolution solve_harmonics(const SystemParams& p,
                                 const DerivedFrequencies& f, double velocity,
                                 int n_max) {
    if (n_max < 1) throw ConfigError("solve_harmonics requires n_max >= 1");
    if (!std::isfinite(velocity))
        throw ConfigError("velocity must be finite");

    const Recurrence r = make_recurrence(p, f, velocity, n_max);
    std::vector<cplx> x;
    double residual = 0.0;
    solve_banded(r, x, residual);

    HarmonicSolution sol;
    sol.n_max = n_max;
    sol.velocity = velocity;
    sol.residual_norm = residual;
    sol.grating_wavevector = f.k_c;
    sol.a_coeffs.resize(static_cast<size_t>(2 * n_max + 1));
    sol.b_coeffs.resize(static_cast<size_t>(2 * n_max + 1));
    for (int n = -n_max; n <= n_max; ++n)
        sol.a(n) = x[static_cast<size_t>(a_index(n, n_max))];
    for (int n = -n_max; n <= n_max - 1; ++n)
        sol.b(n) = x[static_cast<size_t>(b_index(n, n_max))];
    // B_{n_max} closes the window with A_{n_max+1} = 0.
    sol.b(n_max) = r.hc1 * sol.a(n_max) / r.diag_b(n_max);
    return sol;
}

HarmonicSolution analytic_harmonics_v0(const SystemParams& p,
                                       const DerivedFrequencies& f,
                                       int n_max) {
    const cplx gcb{p.gamma_cb, -f.two_photon};
    const cplx d0 = cplx{p.gamma_ab, -p.delta_p} +
                    (p.rabi_c1 * p.rabi_c1 + p.rabi_c2 * p.rabi_c2) /
                        (4.0 * gcb);
    const cplx d1 = p.rabi_c1 * p.rabi_c2 / (2.0 * gcb);
    const cplx drive = kHalfI * p.rabi_p;

    cplx root{}, q{};
    if (d1 != cplx{}) {
        root = std::sqrt(d0 * d0 - d1 * d1);
        const cplx q_plus = (root - d0) / d1;
        const cplx q_minus = (-root - d0) / d1;
        const double ap = std::abs(q_plus), am = std::abs(q_minus);
        if (std::abs(ap - 1.0) < 1e-8 && std::abs(am - 1.0) < 1e-8)
            throw NumericalError(
                "branch degeneracy: both Fourier ratios sit on the unit "
                "circle (D0^2 == D1^2)");
        if (ap < am) {
            q = q_plus;
        } else {
            q = q_minus;
            root = -root;
        }
    }

    if (n_max < 1) {
        // Pick the truncation from the geometric decay so edge coefficients
        // sit at the numerical noise floor.
        n_max = 4;
        const double aq = std::abs(q);
        if (aq > 0.0) {
            const double needed = -35.0 / std::log(aq);
            n_max = static_cast<int>(std::clamp(needed, 4.0, 512.0));
        }
    }

    HarmonicSolution sol;
    sol.n_max = n_max;
    sol.velocity = 0.0;
    sol.grating_wavevector = f.k_c;
    sol.a_coeffs.assign(static_cast<size_t>(2 * n_max + 1), cplx{});
    sol.b_coeffs.assign(static_cast<size_t>(2 * n_max + 1), cplx{});

    // Closed-form A including the two neighbours just outside the stored
    // window; B and the residual need them.
    auto a_closed = [&](int n) -> cplx {
        if (d1 == cplx{}) return n == 0 ? drive / d0 : cplx{};
        return drive * std::pow(q, std::abs(n)) / root;
    };
    for (int n = -n_max; n <= n_max; ++n) sol.a(n) = a_closed(n);
    for (int n = -n_max; n <= n_max; ++n)
        sol.b(n) = kHalfI * (p.rabi_c1 * sol.a(n) + p.rabi_c2 * a_closed(n + 1)) / gcb;

    // Residual against the infinite recurrence restricted to the stored
    // rows; out-of-window neighbours come from the closed form, so this
    // measures roundoff, not truncation.
    auto b_closed = [&](int n) -> cplx {
        return kHalfI * (p.rabi_c1 * a_closed(n) + p.rabi_c2 * a_closed(n + 1)) / gcb;
    };
    double rsq = 0.0;
    const cplx ga{p.gamma_ab, -p.delta_p};
    for (int n = -n_max; n <= n_max; ++n) {
        const cplx bn_1 = (n - 1 < -n_max) ? b_closed(n - 1) : sol.b(n - 1);
        const cplx ra = ga * sol.a(n) - kHalfI * p.rabi_c1 * sol.b(n) -
                        kHalfI * p.rabi_c2 * bn_1 - (n == 0 ? drive : cplx{});
        const cplx an_1 = (n + 1 > n_max) ? a_closed(n + 1) : sol.a(n + 1);
        const cplx rb = gcb * sol.b(n) - kHalfI * p.rabi_c1 * sol.a(n) -
                        kHalfI * p.rabi_c2 * an_1;
        rsq += std::norm(ra) + std::norm(rb);
    }
    const double bnorm = std::abs(drive);
    sol.residual_norm = bnorm > 0.0 ? std::sqrt(rsq) / bnorm : std::sqrt(rsq);
    return sol;
}

SusceptibilityHarmonics susceptibility_from_harmonics(
    const HarmonicSolution& sol, const SystemParams& p,
    const PhysicalConstants& c) {
    if (!(p.rabi_p > 0.0))
        throw ConfigError(
            "susceptibility requires a non-zero probe Rabi frequency");
    const double prefactor =
        2.0 * p.density * c.dipole_moment * c.dipole_moment /
        (c.vacuum_permittivity * c.reduced_planck * p.rabi_p);
    SusceptibilityHarmonics chi;
    chi.n_max = sol.n_max;
    chi.chi.resize(sol.a_coeffs.size());
    for (size_t i = 0; i < sol.a_coeffs.size(); ++i)
        chi.chi[i] = prefactor * sol.a_coeffs[i];
    return chi;
}

std::vector<cplx> spatial_coherence(const HarmonicSolution& sol,
                                    std::span<const double> z_grid) {
    std::vector<cplx> out(z_grid.size());
    const double kc = sol.grating_wavevector;
    for (size_t i = 0; i < z_grid.size(); ++i) {
        cplx acc{};
        for (int n = -sol.n_max; n <= sol.n_max; ++n) {
            const double phase = -2.0 * n * kc * z_grid[i];
            acc += sol.a(n) * std::polar(1.0, phase);
        }
        out[i] = acc;
    }
    return out;
}

HarmonicSolution auto_truncate(const SystemParams& p,
                               const DerivedFrequencies& f, double velocity,
                               double tol, int n_cap) {
    if (!(tol > 0.0)) throw ConfigError("truncation tolerance must be > 0");
    if (n_cap < 4) throw ConfigError("truncation cap must be >= 4");

    HarmonicSolution prev = solve_harmonics(p, f, velocity, 4);
    while (2 * prev.n_max <= n_cap) {
        const HarmonicSolution next =
            solve_harmonics(p, f, velocity, 2 * prev.n_max);

        double change = 0.0;
        for (int n = -prev.n_max; n <= prev.n_max; ++n)
            change = std::max(change, std::abs(next.a(n) - prev.a(n)));
        double ref = std::abs(next.a(0));
        double amax = 0.0;
        for (const cplx& z : prev.a_coeffs) amax = std::max(amax, std::abs(z));
        if (ref == 0.0) ref = amax;

        const double edge = std::max(std::abs(prev.a(-prev.n_max)),
                                     std::abs(prev.a(prev.n_max)));

        if (change <= tol * ref && edge <= tol * amax) return prev;
        prev = next;
    }
    throw ConvergenceError(
        "harmonic truncation did not converge below n_max = " +
        std::to_string(n_cap));
}

} // namespace eigsim
