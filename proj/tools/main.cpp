// eigsim — steady-state reflection spectra of a standing-wave-driven
// three-level vapor. Subcommands produce plot-ready tables; see README.
#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eigsim/config.hpp"
#include "eigsim/errors.hpp"
#include "eigsim/table.hpp"

namespace {

using namespace eigsim;

constexpr const char* kVersion = "0.1.0";
constexpr double kMHz = 2.0 * std::numbers::pi * 1e6;

struct CliOptions {
    std::string scenario_path;
    std::string out_path = "-";
    std::string format = "csv";
    bool no_doppler = false;
    bool no_window_loss = false;
    std::optional<int> n_max;
    std::optional<int> velocity_nodes;
    std::optional<int> threads;
};

Scenario resolve(const CliOptions& cli) {
    Scenario s = load_scenario(cli.scenario_path);
    if (cli.no_doppler) s.options.doppler = false;
    if (cli.no_window_loss) s.options.window_loss = false;
    if (cli.n_max) s.options.n_max = *cli.n_max;
    if (cli.velocity_nodes) s.options.velocity_nodes = *cli.velocity_nodes;
    if (cli.threads) s.options.threads = *cli.threads;
    for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
    return s;
}

OutputTable make_table(const Scenario& s, const std::string& command) {
    OutputTable t;
    t.meta.emplace_back("eigsim_version", kVersion);
    t.meta.emplace_back("command", command);
    for (auto& kv : describe(s)) t.meta.push_back(std::move(kv));
    return t;
}

void cmd_chi(const CliOptions& cli) {
    const Scenario s = resolve(cli);
    const auto grid = s.sweep.delta_p_grid();
    const SweepTable sw = spectrum_sweep(
        s.params, s.constants, grid,
        std::span<const double>(&s.params.delta_c, 1), s.options);

    OutputTable t = make_table(s, "chi");
    t.columns = {"delta_p_mhz", "re_chi0", "im_chi0", "re_chi1", "im_chi1",
                 "n_p"};
    for (size_t ip = 0; ip < grid.size(); ++ip) {
        const PointRecord& r = sw.at(0, 0, ip);
        if (!r.ok) throw NumericalError(r.error);
        t.rows.push_back({grid[ip] / kMHz, r.chi0.real(), r.chi0.imag(),
                          r.chi_p1.real(), r.chi_p1.imag(), r.n_p});
    }
    write_table(t, cli.out_path, cli.format);
}

void cmd_reflect(const CliOptions& cli) {
    const Scenario s = resolve(cli);
    const auto grid = s.sweep.delta_p_grid();
    const SweepTable sw = spectrum_sweep(s.params, s.constants, grid,
                                         s.sweep.delta_c_list, s.options);

    OutputTable t = make_table(s, "reflect");
    t.columns = {"delta_p_mhz",  "delta_c_mhz",  "delta_k_per_m",
                 "eta_percent",  "transmission", "phase_shift_rad"};
    for (size_t ic = 0; ic < sw.delta_c.size(); ++ic) {
        for (size_t ip = 0; ip < grid.size(); ++ip) {
            const PointRecord& r = sw.at(0, ic, ip);
            if (!r.ok) throw NumericalError(r.error);
            t.rows.push_back({grid[ip] / kMHz, sw.delta_c[ic] / kMHz,
                              r.delta_k, r.eta * 100.0, r.transmission,
                              r.phase_shift});
        }
    }
    write_table(t, cli.out_path, cli.format);
}

void cmd_mismatch(const CliOptions& cli) {
    const Scenario s = resolve(cli);
    const auto grid = s.sweep.delta_p_grid();
    const SweepTable sw = spectrum_sweep(s.params, s.constants, grid,
                                         s.sweep.delta_c_list, s.options);

    OutputTable t = make_table(s, "mismatch");
    t.columns = {"delta_p_mhz", "delta_c_mhz", "delta_k_per_m",
                 "abs_delta_k_per_m", "delta_k_baseline_per_m"};
    for (size_t ic = 0; ic < sw.delta_c.size(); ++ic) {
        for (size_t ip = 0; ip < grid.size(); ++ip) {
            const PointRecord& r = sw.at(0, ic, ip);
            if (!r.ok) throw NumericalError(r.error);
            SystemParams pp = s.params;
            pp.delta_p = grid[ip];
            pp.delta_c = sw.delta_c[ic];
            const DerivedFrequencies f = derive_frequencies(pp, s.constants);
            const double baseline =
                phase_mismatch(f, pp.theta, cplx{0.0, 0.0},
                               s.constants.speed_of_light);
            t.rows.push_back({grid[ip] / kMHz, sw.delta_c[ic] / kMHz,
                              r.delta_k, std::abs(r.delta_k), baseline});
        }
    }
    write_table(t, cli.out_path, cli.format);
}

void cmd_phase(const CliOptions& cli) {
    const Scenario s = resolve(cli);
    const auto grid = s.sweep.delta_p_grid();
    const SweepTable sw = spectrum_sweep(s.params, s.constants, grid,
                                         s.sweep.delta_c_list, s.options);

    OutputTable t = make_table(s, "phase");
    t.columns = {"delta_mhz", "delta_c_mhz", "phase_shift_rad"};
    for (size_t ic = 0; ic < sw.delta_c.size(); ++ic) {
        for (size_t ip = 0; ip < grid.size(); ++ip) {
            const PointRecord& r = sw.at(0, ic, ip);
            if (!r.ok) throw NumericalError(r.error);
            const double two_photon = grid[ip] - sw.delta_c[ic];
            t.rows.push_back(
                {two_photon / kMHz, sw.delta_c[ic] / kMHz, r.phase_shift});
        }
    }
    write_table(t, cli.out_path, cli.format);
}

void cmd_scan(const CliOptions& cli) {
    const Scenario s = resolve(cli);
    const auto dp = s.sweep.delta_p_grid();
    const auto dc = s.sweep.delta_c_grid();
    const ScanResult scan = coupling_detuning_scan(
        s.params, s.constants, dc, dp, s.sweep.density_list, s.options);

    OutputTable t = make_table(s, "scan");
    t.columns = {"density_m3", "delta_c_mhz", "eta_max_percent",
                 "delta_p_at_peak_mhz", "fwhm_mhz"};
    for (const ScanRow& row : scan.rows) {
        t.rows.push_back({row.density, row.delta_c / kMHz,
                          row.peak.eta_max * 100.0,
                          row.peak.delta_p_at_peak / kMHz,
                          row.peak.fwhm / kMHz});
    }
    for (const auto& [density, best] : scan.best_delta_c)
        t.footer.push_back("best_delta_c_mhz density=" +
                           format_double(density) + " : " +
                           format_double(best / kMHz));
    write_table(t, cli.out_path, cli.format);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reflection spectra of a standing-wave-coupled three-level "
                 "vapor"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CliOptions cli;
    void (*handlers[])(const CliOptions&) = {cmd_chi, cmd_reflect,
                                             cmd_mismatch, cmd_phase,
                                             cmd_scan};
    const char* names[] = {"chi", "reflect", "mismatch", "phase", "scan"};
    const char* descriptions[] = {
        "Susceptibility harmonics vs probe detuning",
        "Reflection spectrum vs probe detuning per coupling detuning",
        "Phase mismatch vs probe detuning per coupling detuning",
        "Probe phase shift vs two-photon detuning",
        "Peak reflection vs coupling detuning per density",
    };
    int selected = -1;
    for (int i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descriptions[i]);
        sub->add_option("--scenario", cli.scenario_path, "Scenario file")
            ->required();
        sub->add_option("--out", cli.out_path, "Output path ('-' = stdout)");
        sub->add_option("--format", cli.format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--no-doppler", cli.no_doppler,
                      "Bypass velocity averaging (v = 0)");
        sub->add_flag("--no-window-loss", cli.no_window_loss,
                      "Disable the (1-loss)^2 window factor");
        sub->add_option("--nmax", cli.n_max,
                        "Fixed harmonic truncation (0 = auto)");
        sub->add_option("--velocity-nodes", cli.velocity_nodes,
                        "Velocity quadrature order");
        sub->add_option("--threads", cli.threads, "Worker threads (0 = auto)");
        sub->callback([&selected, i] { selected = i; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        handlers[selected](cli);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
