#pragma once

#include <span>
#include <string>
#include <utility>

#include "eigsim/doppler.hpp"
#include "eigsim/optics.hpp"

namespace eigsim {

// Per-point numerical policy shared by the sweep entry points.
struct SolveOptions {
    bool doppler = true;
    int n_max = 0; // 0 = automatic truncation
    double truncation_tol = 1e-4;
    int n_cap = 512;
    int velocity_nodes = 64;
    VelocityScheme scheme = VelocityScheme::gauss_hermite;
    bool window_loss = true;
    int threads = 0; // 0 = hardware concurrency
};

// Susceptibility harmonics at the (delta_p, delta_c) carried by params,
// honoring the doppler/truncation policy.
SusceptibilityHarmonics chi_point(const SystemParams& p,
                                  const PhysicalConstants& c,
                                  const SolveOptions& opts,
                                  const VelocityGrid* grid = nullptr);

struct PointRecord {
    cplx chi0{}, chi_p1{}, chi_m1{};
    double n_p = 0.0;
    double delta_k = 0.0;
    double eta = 0.0;
    double transmission = 0.0;
    double phase_shift = 0.0;
    bool ok = false;
    std::string error;
};

// Rectangular grid of spectral outputs; records are laid out with delta_p
// fastest, then delta_c, then density.
struct SweepTable {
    std::vector<double> delta_p; // rad/s
    std::vector<double> delta_c; // rad/s
    std::vector<double> density; // atoms/m^3

    std::vector<PointRecord> records;

    const PointRecord& at(size_t i_density, size_t i_delta_c,
                          size_t i_delta_p) const {
        return records[(i_density * delta_c.size() + i_delta_c) * delta_p.size() +
                       i_delta_p];
    }
};

// Evaluates lineshape (+ optional Doppler averaging) and optics per grid
// point in parallel; per-point failures are recorded and the sweep
// continues unless more than 10% of the points fail. Output is
// deterministic for any worker count.
SweepTable spectrum_sweep(const SystemParams& p, const PhysicalConstants& c,
                          std::span<const double> delta_p_grid,
                          std::span<const double> delta_c_list,
                          const SolveOptions& opts);

struct PeakMetrics {
    double eta_max = 0.0;
    double delta_p_at_peak = 0.0; // rad/s
    double left_crossing = 0.0;   // rad/s, NaN when unbounded
    double right_crossing = 0.0;
    double fwhm = 0.0; // NaN when either side is unbounded
    bool left_bounded = false;
    bool right_bounded = false;
};

// Grid maximum (ties toward smallest delta_p) refined by a three-point
// parabola; half-max crossings by linear interpolation on the first
// crossing outward from the peak.
PeakMetrics peak_metrics(std::span<const double> delta_p,
                         std::span<const double> eta);

struct ScanRow {
    double density = 0.0;
    double delta_c = 0.0;
    PeakMetrics peak;
};

struct ScanResult {
    std::vector<ScanRow> rows; // density-major, delta_c fastest
    // Per density, the delta_c whose spectrum attains the largest eta_max.
    std::vector<std::pair<double, double>> best_delta_c;
};

ScanResult coupling_detuning_scan(const SystemParams& p,
                                  const PhysicalConstants& c,
                                  std::span<const double> delta_c_grid,
                                  std::span<const double> delta_p_grid,
                                  std::span<const double> densities,
                                  const SolveOptions& opts);

} // namespace eigsim
