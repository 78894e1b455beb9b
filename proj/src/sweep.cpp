#include "eigsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "eigsim/errors.hpp"

namespace eigsim {

namespace {

SusceptibilityHarmonics chi_with_grid(const SystemParams& p,
                                      const PhysicalConstants& c,
                                      const SolveOptions& opts,
                                      const VelocityGrid* grid) {
    const DerivedFrequencies f = derive_frequencies(p, c);
    if (!opts.doppler) {
        const HarmonicSolution sol =
            opts.n_max > 0
                ? solve_harmonics(p, f, 0.0, opts.n_max)
                : auto_truncate(p, f, 0.0, opts.truncation_tol, opts.n_cap);
        return susceptibility_from_harmonics(sol, p, c);
    }
    VelocityGrid local;
    if (grid == nullptr) {
        local = make_velocity_grid(p.temperature, c.atom_mass,
                                   opts.velocity_nodes, opts.scheme,
                                   c.boltzmann);
        grid = &local;
    }
    return opts.n_max > 0
               ? doppler_average(p, f, c, *grid, opts.n_max)
               : doppler_average_auto(p, f, c, *grid, opts.truncation_tol,
                                      opts.n_cap);
}

PointRecord evaluate_point(const SystemParams& p, const PhysicalConstants& c,
                           const SolveOptions& opts,
                           const VelocityGrid* grid) {
    PointRecord rec;
    try {
        const DerivedFrequencies f = derive_frequencies(p, c);
        const SusceptibilityHarmonics chi = chi_with_grid(p, c, opts, grid);
        if (chi.n_max < 1)
            throw NumericalError("harmonic window too small for reflection");
        rec.chi0 = chi(0);
        rec.chi_p1 = chi(1);
        rec.chi_m1 = chi(-1);
        rec.n_p = refractive_index(chi(0));
        rec.phase_shift = probe_phase_shift(chi(0), f.k_p, p.length);
        const PropagationResult prop =
            reflection_point(p, f, chi, c, opts.window_loss);
        rec.delta_k = prop.delta_k;
        rec.eta = prop.eta;
        rec.transmission = prop.transmission;
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    return rec;
}

void check_grid(std::span<const double> grid, const char* name) {
    if (grid.size() < 2)
        throw ConfigError(std::string(name) + " grid needs at least 2 points");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ConfigError(std::string(name) +
                              " grid must be strictly increasing");
}

void parallel_for(size_t total, int threads, const auto& body) {
    unsigned n = threads > 0 ? static_cast<unsigned>(threads)
                             : std::thread::hardware_concurrency();
    n = std::max(1u, std::min<unsigned>(n, total == 0 ? 1 : total));
    if (n == 1) {
        for (size_t i = 0; i < total; ++i) body(i);
        return;
    }
    std::atomic<size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back([&] {
            for (size_t i = cursor.fetch_add(1); i < total;
                 i = cursor.fetch_add(1))
                body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

SusceptibilityHarmonics chi_point(const SystemParams& p,
                                  const PhysicalConstants& c,
                                  const SolveOptions& opts,
                                  const VelocityGrid* grid) {
    return chi_with_grid(p, c, opts, grid);
}

SweepTable spectrum_sweep(const SystemParams& p, const PhysicalConstants& c,
                          std::span<const double> delta_p_grid,
                          std::span<const double> delta_c_list,
                          const SolveOptions& opts) {
    check_grid(delta_p_grid, "delta_p");
    if (delta_c_list.empty())
        throw ConfigError("delta_c list must not be empty");
    validate(p);
    c.validate();

    SweepTable table;
    table.delta_p.assign(delta_p_grid.begin(), delta_p_grid.end());
    table.delta_c.assign(delta_c_list.begin(), delta_c_list.end());
    table.density = {p.density};
    table.records.resize(table.delta_p.size() * table.delta_c.size());

    VelocityGrid grid;
    if (opts.doppler)
        grid = make_velocity_grid(p.temperature, c.atom_mass,
                                  opts.velocity_nodes, opts.scheme,
                                  c.boltzmann);

    const size_t np = table.delta_p.size();
    parallel_for(table.records.size(), opts.threads, [&](size_t idx) {
        SystemParams local = p;
        local.delta_c = table.delta_c[idx / np];
        local.delta_p = table.delta_p[idx % np];
        table.records[idx] =
            evaluate_point(local, c, opts, opts.doppler ? &grid : nullptr);
    });

    const size_t failed = static_cast<size_t>(
        std::count_if(table.records.begin(), table.records.end(),
                      [](const PointRecord& r) { return !r.ok; }));
    if (failed * 10 > table.records.size()) {
        const auto first = std::find_if(table.records.begin(),
                                        table.records.end(),
                                        [](const PointRecord& r) { return !r.ok; });
        throw NumericalError("sweep failed on " + std::to_string(failed) +
                             " of " + std::to_string(table.records.size()) +
                             " points; first error: " + first->error);
    }
    return table;
}

PeakMetrics peak_metrics(std::span<const double> delta_p,
                         std::span<const double> eta) {
    if (delta_p.size() != eta.size())
        throw ConfigError("peak_metrics: mismatched series lengths");
    if (delta_p.size() < 3)
        throw ConfigError("peak_metrics needs at least 3 points");

    size_t imax = 0;
    for (size_t i = 1; i < eta.size(); ++i)
        if (eta[i] > eta[imax]) imax = i; // strict: ties keep smallest delta_p

    PeakMetrics m;
    m.eta_max = eta[imax];
    m.delta_p_at_peak = delta_p[imax];

    if (imax > 0 && imax + 1 < eta.size()) {
        // Vertex of the parabola through the three bracketing samples
        // (general spacing).
        const double x0 = delta_p[imax - 1], x1 = delta_p[imax],
                     x2 = delta_p[imax + 1];
        const double y0 = eta[imax - 1], y1 = eta[imax], y2 = eta[imax + 1];
        const double d0 = (y1 - y0) / (x1 - x0);
        const double d1 = (y2 - y1) / (x2 - x1);
        const double curv = (d1 - d0) / (x2 - x0); // half the 2nd derivative
        if (curv < 0.0) {
            // Newton form: y = y0 + d0 (x - x0) + curv (x - x0)(x - x1)
            const double vertex = 0.5 * (x0 + x1) - d0 / (2.0 * curv);
            if (vertex > x0 && vertex < x2) {
                const double yv = y0 + d0 * (vertex - x0) +
                                  curv * (vertex - x0) * (vertex - x1);
                if (yv >= m.eta_max) {
                    m.eta_max = yv;
                    m.delta_p_at_peak = vertex;
                }
            }
        }
    }

    const double half = 0.5 * m.eta_max;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    m.left_crossing = nan;
    m.right_crossing = nan;

    for (size_t i = imax; i-- > 0;) {
        if (eta[i] < half) {
            const double t = (half - eta[i]) / (eta[i + 1] - eta[i]);
            m.left_crossing = delta_p[i] + t * (delta_p[i + 1] - delta_p[i]);
            m.left_bounded = true;
            break;
        }
    }
    for (size_t i = imax + 1; i < eta.size(); ++i) {
        if (eta[i] < half) {
            const double t = (eta[i - 1] - half) / (eta[i - 1] - eta[i]);
            m.right_crossing = delta_p[i - 1] + t * (delta_p[i] - delta_p[i - 1]);
            m.right_bounded = true;
            break;
        }
    }
    m.fwhm = (m.left_bounded && m.right_bounded)
                 ? m.right_crossing - m.left_crossing
                 : nan;
    return m;
}

ScanResult coupling_detuning_scan(const SystemParams& p,
                                  const PhysicalConstants& c,
                                  std::span<const double> delta_c_grid,
                                  std::span<const double> delta_p_grid,
                                  std::span<const double> densities,
                                  const SolveOptions& opts) {
    check_grid(delta_c_grid, "delta_c");
    if (densities.empty()) throw ConfigError("density list must not be empty");

    ScanResult result;
    for (double density : densities) {
        size_t best = 0;
        for (size_t ic = 0; ic < delta_c_grid.size(); ++ic) {
            SystemParams local = p;
            local.density = density;
            local.delta_c = delta_c_grid[ic];
            const SweepTable table = spectrum_sweep(
                local, c, delta_p_grid,
                std::span<const double>(&delta_c_grid[ic], 1), opts);
            std::vector<double> eta(table.delta_p.size());
            for (size_t ip = 0; ip < eta.size(); ++ip)
                eta[ip] = table.at(0, 0, ip).eta;
            ScanRow row;
            row.density = density;
            row.delta_c = delta_c_grid[ic];
            row.peak = peak_metrics(table.delta_p, eta);
            result.rows.push_back(row);
            const size_t base = result.rows.size() - 1 - ic;
            if (row.peak.eta_max > result.rows[base + best].peak.eta_max)
                best = ic;
        }
        const size_t base = result.rows.size() - delta_c_grid.size();
        result.best_delta_c.emplace_back(density,
                                         result.rows[base + best].delta_c);
    }
    return result;
}

} // namespace eigsim
