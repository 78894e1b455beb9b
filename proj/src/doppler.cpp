#include "eigsim/doppler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <lapacke.h>

#include "eigsim/errors.hpp"

namespace eigsim {

namespace {

// Golub-Welsch: eigenvalues of the Hermite Jacobi matrix are the nodes,
// squared first eigenvector components the normalized weights.
void gauss_hermite(int order, std::vector<double>& x, std::vector<double>& w) {
    const lapack_int n = order;
    std::vector<double> diag(static_cast<size_t>(n), 0.0);
    std::vector<double> off(static_cast<size_t>(std::max<lapack_int>(n - 1, 1)));
    for (lapack_int k = 1; k < n; ++k)
        off[static_cast<size_t>(k - 1)] = std::sqrt(0.5 * k);
    std::vector<double> z(static_cast<size_t>(n) * n);
    lapack_int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', n, diag.data(),
                                    off.data(), z.data(), n);
    if (info != 0)
        throw NumericalError("Gauss-Hermite node computation failed (dstev)");
    x.resize(static_cast<size_t>(n));
    w.resize(static_cast<size_t>(n));
    for (lapack_int j = 0; j < n; ++j) {
        x[static_cast<size_t>(j)] = diag[static_cast<size_t>(j)];
        const double v0 = z[static_cast<size_t>(j) * n];
        w[static_cast<size_t>(j)] = v0 * v0;
    }
    // dstev returns ascending eigenvalues; force exact symmetry about 0.
    for (lapack_int j = 0; j < n / 2; ++j) {
        const size_t a = static_cast<size_t>(j);
        const size_t b = static_cast<size_t>(n - 1 - j);
        const double xs = 0.5 * (x[b] - x[a]);
        x[a] = -xs;
        x[b] = xs;
        const double ws = 0.5 * (w[a] + w[b]);
        w[a] = w[b] = ws;
    }
    if (n % 2 == 1) x[static_cast<size_t>(n / 2)] = 0.0;
}

} // namespace

VelocityGrid make_velocity_grid(double temperature, double mass, int order,
                                VelocityScheme scheme, double boltzmann) {
    if (!(temperature > 0.0)) throw ConfigError("temperature must be > 0");
    if (!(mass > 0.0)) throw ConfigError("atom mass must be > 0");
    if (order < 1) throw ConfigError("velocity grid order must be >= 1");

    VelocityGrid grid;
    grid.scheme = scheme;
    grid.most_probable_speed = std::sqrt(2.0 * boltzmann * temperature / mass);
    const double u = grid.most_probable_speed;

    if (order == 1) {
        grid.nodes = {0.0};
        grid.weights = {1.0};
        return grid;
    }

    if (scheme == VelocityScheme::gauss_hermite) {
        std::vector<double> x, w;
        gauss_hermite(order, x, w);
        grid.nodes.resize(x.size());
        grid.weights = w;
        for (size_t i = 0; i < x.size(); ++i) grid.nodes[i] = u * x[i];
    } else {
        const double span = 5.0; // in units of u; e^{-25} tail is negligible
        grid.nodes.resize(static_cast<size_t>(order));
        grid.weights.resize(static_cast<size_t>(order));
        double sum = 0.0;
        for (int j = 0; j < order; ++j) {
            const double xj = -span + 2.0 * span * j / (order - 1);
            const double trap = (j == 0 || j == order - 1) ? 0.5 : 1.0;
            grid.nodes[static_cast<size_t>(j)] = u * xj;
            grid.weights[static_cast<size_t>(j)] = trap * std::exp(-xj * xj);
            sum += grid.weights[static_cast<size_t>(j)];
        }
        for (double& w : grid.weights) w /= sum;
    }
    return grid;
}

namespace {

std::vector<cplx> averaged_coefficients(const SystemParams& p,
                                        const DerivedFrequencies& f,
                                        const VelocityGrid& grid, int n_max) {
    std::vector<cplx> acc(static_cast<size_t>(2 * n_max + 1), cplx{});
    for (size_t j = 0; j < grid.nodes.size(); ++j) {
        HarmonicSolution sol;
        try {
            sol = solve_harmonics(p, f, grid.nodes[j], n_max);
        } catch (const NumericalError& e) {
            throw NumericalError(std::string(e.what()) + " (at velocity " +
                                 std::to_string(grid.nodes[j]) + " m/s)");
        }
        for (size_t i = 0; i < acc.size(); ++i)
            acc[i] += grid.weights[j] * sol.a_coeffs[i];
    }
    return acc;
}

SusceptibilityHarmonics to_chi(std::vector<cplx> a, int n_max,
                               const SystemParams& p,
                               const PhysicalConstants& c) {
    HarmonicSolution carrier;
    carrier.n_max = n_max;
    carrier.a_coeffs = std::move(a);
    carrier.b_coeffs.assign(carrier.a_coeffs.size(), cplx{});
    return susceptibility_from_harmonics(carrier, p, c);
}

} // namespace

SusceptibilityHarmonics doppler_average(const SystemParams& p,
                                        const DerivedFrequencies& f,
                                        const PhysicalConstants& c,
                                        const VelocityGrid& grid, int n_max) {
    if (grid.nodes.empty() || grid.nodes.size() != grid.weights.size())
        throw ConfigError("velocity grid is empty or inconsistent");
    return to_chi(averaged_coefficients(p, f, grid, n_max), n_max, p, c);
}

SusceptibilityHarmonics doppler_average_auto(const SystemParams& p,
                                             const DerivedFrequencies& f,
                                             const PhysicalConstants& c,
                                             const VelocityGrid& grid,
                                             double tol, int n_cap) {
    if (!(tol > 0.0)) throw ConfigError("truncation tolerance must be > 0");

    int n = 4;
    std::vector<cplx> prev = averaged_coefficients(p, f, grid, n);
    while (2 * n <= n_cap) {
        std::vector<cplx> next = averaged_coefficients(p, f, grid, 2 * n);
        const auto at = [&](const std::vector<cplx>& v, int nm, int k) {
            return v[static_cast<size_t>(k + nm)];
        };
        double change = 0.0;
        for (int k = -n; k <= n; ++k)
            change = std::max(change, std::abs(at(next, 2 * n, k) - at(prev, n, k)));
        double amax = 0.0;
        for (const cplx& z : prev) amax = std::max(amax, std::abs(z));
        double ref = std::abs(at(next, 2 * n, 0));
        if (ref == 0.0) ref = amax;
        const double edge =
            std::max(std::abs(at(prev, n, -n)), std::abs(at(prev, n, n)));
        if (change <= tol * ref && edge <= tol * amax)
            return to_chi(std::move(prev), n, p, c);
        prev = std::move(next);
        n *= 2;
    }
    throw ConvergenceError(
        "Doppler-averaged truncation did not converge below n_max = " +
        std::to_string(n_cap));
}

} // namespace eigsim
