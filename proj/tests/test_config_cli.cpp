#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "eigsim/config.hpp"
#include "eigsim/errors.hpp"
#include "eigsim/table.hpp"
#include "oracles.hpp"

using namespace eigsim;
using oracles::kMHz;
namespace fs = std::filesystem;

#ifndef EIGSIM_CLI_PATH
#error "EIGSIM_CLI_PATH must be defined by the build"
#endif
#ifndef EIGSIM_SOURCE_DIR
#error "EIGSIM_SOURCE_DIR must be defined by the build"
#endif

namespace {

struct CliRun {
    int exit_code;
    std::string stderr_text;
};

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "eigsim_cli_tests";
    fs::create_directories(dir);
    return dir;
}

CliRun run_cli(const std::string& args, const std::string& tag) {
    const fs::path err = work_dir() / (tag + ".stderr");
    const std::string cmd =
        std::string(EIGSIM_CLI_PATH) + " " + args + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    CliRun result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(err);
    std::stringstream ss;
    ss << in.rdbuf();
    result.stderr_text = ss.str();
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Tiny fast scenario: no Doppler, fixed truncation, 5-point grid.
std::string tiny_scenario(const std::string& extra_numerics = "",
                          const std::string& sweep =
                              "delta_p_min_mhz = -2\n"
                              "delta_p_max_mhz = 2\n"
                              "delta_p_step_mhz = 1\n",
                          const std::string& medium =
                              "density_m3 = 1e15\n"
                              "length_cm = 7.5\n"
                              "temperature_c = 43\n") {
    return "[atom]\n"
           "gamma_a_mhz = 4.6\n"
           "gamma_cb_mhz = 0.138\n"
           "hyperfine_split_mhz = 9200\n"
           "[fields]\n"
           "rabi_p_mhz = 3\n"
           "rabi_c1_mhz = 50\n"
           "rabi_c2_mhz = 50\n"
           "delta_p_mhz = 0\n"
           "delta_c_mhz = -11\n"
           "theta_deg = 0.14\n"
           "[medium]\n" +
           medium + "[numerics]\ndoppler = off\nn_max = 12\n" +
           extra_numerics + "[sweep]\n" + sweep;
}

fs::path write_scenario(const std::string& text, const std::string& name) {
    const fs::path path = work_dir() / name;
    std::ofstream out(path);
    out << text;
    return path;
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> lines;
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("shipped canonical scenario parses to the documented numbers") {
    const Scenario s = load_scenario(std::string(EIGSIM_SOURCE_DIR) +
                                     "/scenarios/canonical.ini");
    const SystemParams expect = oracles::canonical_params();
    CHECK(s.params.gamma_a == doctest::Approx(expect.gamma_a).epsilon(1e-12));
    CHECK(s.params.gamma_ab == doctest::Approx(expect.gamma_ab).epsilon(1e-12));
    CHECK(s.params.gamma_cb == doctest::Approx(expect.gamma_cb).epsilon(1e-12));
    CHECK(s.params.rabi_c1 == doctest::Approx(expect.rabi_c1).epsilon(1e-12));
    CHECK(s.params.delta_c == doctest::Approx(expect.delta_c).epsilon(1e-12));
    CHECK(s.params.density == expect.density);
    CHECK(s.params.window_loss == expect.window_loss);
    CHECK(s.params.temperature == doctest::Approx(316.15).epsilon(1e-12));
    CHECK(s.options.doppler);
    CHECK(s.options.velocity_nodes == 64);
    CHECK(s.sweep.delta_p_grid().size() == 801);
    CHECK(s.sweep.delta_c_list.size() == 7);
    CHECK(s.warnings.empty());
}

TEST_CASE("sweep grids") {
    std::istringstream in(tiny_scenario());
    Scenario s = parse_scenario(in, "<tiny>");
    CHECK(s.sweep.delta_p_grid().size() == 5);
    CHECK(s.sweep.delta_p_grid().front() == doctest::Approx(-2.0 * kMHz));
    CHECK(s.sweep.delta_p_grid().back() == doctest::Approx(2.0 * kMHz));
    // delta_c list defaults to the fields value
    REQUIRE(s.sweep.delta_c_list.size() == 1);
    CHECK(s.sweep.delta_c_list[0] == doctest::Approx(-11.0 * kMHz));

    s.sweep.delta_p_step = -1.0;
    CHECK_THROWS_AS(s.sweep.delta_p_grid(), ConfigError);
}

TEST_CASE("format_double is locale-independent, 12 significant digits") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.04) == "-0.04");
    CHECK(format_double(385.63548403876126) == "385.635484039");
    CHECK(format_double(6.086965256314383e-07) == "6.08696525631e-07");
}

TEST_CASE("cli: chi subcommand contract") {
    const fs::path scenario = write_scenario(tiny_scenario(), "tiny.ini");
    const fs::path out = work_dir() / "chi.csv";

    const CliRun run = run_cli("chi --scenario " + scenario.string() +
                                   " --out " + out.string(),
                               "chi");
    CHECK(run.exit_code == 0);
    const std::string csv = slurp(out);
    const auto lines = data_lines(csv);
    REQUIRE(lines.size() == 6); // header + 5 rows
    CHECK(lines[0] == "delta_p_mhz,re_chi0,im_chi0,re_chi1,im_chi1,n_p");
    CHECK(csv.find("# eigsim_version = ") != std::string::npos);
    CHECK(csv.find("# gamma_a_rad_s = ") != std::string::npos);

    SUBCASE("reruns are byte identical") {
        const fs::path out2 = work_dir() / "chi2.csv";
        const CliRun rerun = run_cli("chi --scenario " + scenario.string() +
                                         " --out " + out2.string(),
                                     "chi2");
        CHECK(rerun.exit_code == 0);
        CHECK(slurp(out2) == csv);
    }
    SUBCASE("json output carries the same columns") {
        const fs::path outj = work_dir() / "chi.json";
        const CliRun jrun = run_cli("chi --scenario " + scenario.string() +
                                        " --out " + outj.string() +
                                        " --format json",
                                    "chij");
        CHECK(jrun.exit_code == 0);
        const auto j = nlohmann::json::parse(slurp(outj));
        CHECK(j.at("columns").size() == 6);
        CHECK(j.at("rows").size() == 5);
        CHECK(j.at("meta").contains("eigsim_version"));
    }
}

TEST_CASE("cli: reflect rows and eta in percent") {
    const std::string text = tiny_scenario(
        "", "delta_p_min_mhz = -2\ndelta_p_max_mhz = 2\ndelta_p_step_mhz = 1\n"
            "delta_c_list_mhz = -11, 0\n");
    const fs::path scenario = write_scenario(text, "reflect.ini");
    const fs::path out = work_dir() / "reflect.csv";
    const CliRun run = run_cli("reflect --scenario " + scenario.string() +
                                   " --out " + out.string(),
                               "reflect");
    CHECK(run.exit_code == 0);
    const auto lines = data_lines(slurp(out));
    REQUIRE(lines.size() == 1 + 2 * 5);
    CHECK(lines[0] ==
          "delta_p_mhz,delta_c_mhz,delta_k_per_m,eta_percent,transmission,"
          "phase_shift_rad");

    // eta_percent = 100 * eta(fraction): cross-check one row against the
    // library.
    const Scenario s = load_scenario(scenario.string());
    SystemParams p = s.params;
    p.delta_p = -2.0 * kMHz;
    p.delta_c = -11.0 * kMHz;
    const SusceptibilityHarmonics chi = chi_point(p, s.constants, s.options);
    const PropagationResult prop = reflection_point(
        p, derive_frequencies(p, s.constants), chi, s.constants, true);
    std::stringstream row(lines[1]);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
    REQUIRE(cells.size() == 6);
    CHECK(cells[3] == doctest::Approx(100.0 * prop.eta).epsilon(1e-9));
    CHECK(cells[2] == doctest::Approx(prop.delta_k).epsilon(1e-9));
}

TEST_CASE("cli: mismatch baseline column equals the chi0-disabled value") {
    const fs::path scenario = write_scenario(tiny_scenario(), "mismatch.ini");
    const fs::path out = work_dir() / "mismatch.csv";
    const CliRun run = run_cli("mismatch --scenario " + scenario.string() +
                                   " --out " + out.string(),
                               "mismatch");
    CHECK(run.exit_code == 0);
    const auto lines = data_lines(slurp(out));
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] ==
          "delta_p_mhz,delta_c_mhz,delta_k_per_m,abs_delta_k_per_m,"
          "delta_k_baseline_per_m");

    const Scenario s = load_scenario(scenario.string());
    for (size_t i = 1; i < lines.size(); ++i) {
        std::stringstream row(lines[i]);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
        REQUIRE(cells.size() == 5);
        SystemParams p = s.params;
        p.delta_p = cells[0] * kMHz;
        p.delta_c = cells[1] * kMHz;
        const double baseline = phase_mismatch(
            derive_frequencies(p, s.constants), p.theta, cplx{},
            s.constants.speed_of_light);
        CHECK(cells[4] == doctest::Approx(baseline).epsilon(1e-9));
        CHECK(cells[3] == doctest::Approx(std::abs(cells[2])).epsilon(1e-12));
        CHECK(cells[2] < 0.0); // intrinsic mismatch is negative here
    }
}

TEST_CASE("cli: phase shift vanishes in an empty cell") {
    const std::string text = tiny_scenario(
        "", "delta_p_min_mhz = -2\ndelta_p_max_mhz = 2\ndelta_p_step_mhz = 1\n",
        "density_m3 = 0\nlength_cm = 7.5\ntemperature_c = 43\n");
    const fs::path scenario = write_scenario(text, "phase.ini");
    const fs::path out = work_dir() / "phase.csv";
    const CliRun run = run_cli("phase --scenario " + scenario.string() +
                                   " --out " + out.string(),
                               "phase");
    CHECK(run.exit_code == 0);
    const auto lines = data_lines(slurp(out));
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "delta_mhz,delta_c_mhz,phase_shift_rad");
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto last = lines[i].rfind(',');
        CHECK(std::stod(lines[i].substr(last + 1)) == 0.0);
    }
}

TEST_CASE("cli: scan emits peak rows and best-detuning footer") {
    const std::string text = tiny_scenario(
        "", "delta_p_min_mhz = -14\ndelta_p_max_mhz = -8\n"
            "delta_p_step_mhz = 0.5\n"
            "delta_c_min_mhz = -12\ndelta_c_max_mhz = -10\n"
            "delta_c_step_mhz = 1\n"
            "density_list_m3 = 5e14, 1e15\n");
    const fs::path scenario = write_scenario(text, "scan.ini");
    const fs::path out = work_dir() / "scan.csv";
    const CliRun run = run_cli("scan --scenario " + scenario.string() +
                                   " --out " + out.string(),
                               "scan");
    CHECK(run.exit_code == 0);
    const std::string csv = slurp(out);
    const auto lines = data_lines(csv);
    REQUIRE(lines.size() == 1 + 3 * 2);
    CHECK(lines[0] ==
          "density_m3,delta_c_mhz,eta_max_percent,delta_p_at_peak_mhz,"
          "fwhm_mhz");
    size_t footers = 0;
    for (size_t pos = csv.find("# best_delta_c_mhz density=");
         pos != std::string::npos;
         pos = csv.find("# best_delta_c_mhz density=", pos + 1))
        ++footers;
    CHECK(footers == 2);
}

TEST_CASE("cli: exit codes") {
    SUBCASE("missing scenario file is a config error") {
        const CliRun run =
            run_cli("chi --scenario /nonexistent.ini --out -", "missing");
        CHECK(run.exit_code == 2);
    }
    SUBCASE("empty grid is a config error") {
        const std::string text = tiny_scenario(
            "", "delta_p_min_mhz = 2\ndelta_p_max_mhz = -2\n"
                "delta_p_step_mhz = 1\n");
        const fs::path scenario = write_scenario(text, "empty_grid.ini");
        const CliRun run =
            run_cli("chi --scenario " + scenario.string() + " --out -",
                    "empty_grid");
        CHECK(run.exit_code == 2);
        CHECK(run.stderr_text.find("config error") != std::string::npos);
    }
    SUBCASE("unknown key is a config error naming the key") {
        const fs::path scenario = write_scenario(
            tiny_scenario("spline_order = 3\n"), "unknown_key.ini");
        const CliRun run =
            run_cli("chi --scenario " + scenario.string() + " --out -",
                    "unknown_key");
        CHECK(run.exit_code == 2);
        CHECK(run.stderr_text.find("numerics.spline_order") !=
              std::string::npos);
    }
    SUBCASE("unparseable flag is a config error") {
        const CliRun run = run_cli("chi --scenario", "bad_flag");
        CHECK(run.exit_code == 2);
    }
    SUBCASE("truncation blowup is a numerical failure") {
        const std::string text = tiny_scenario(
            "n_cap = 8\n",
            "delta_p_min_mhz = -11.2\ndelta_p_max_mhz = -10.8\n"
            "delta_p_step_mhz = 0.2\n");
        // n_max = 12 exceeds the cap indirectly: force auto truncation
        const std::string patched =
            [&] {
                std::string t = text;
                const auto pos = t.find("n_max = 12");
                t.replace(pos, std::strlen("n_max = 12"), "n_max = 0");
                return t;
            }();
        const fs::path scenario = write_scenario(patched, "blowup.ini");
        const CliRun run =
            run_cli("chi --scenario " + scenario.string() + " --out -",
                    "blowup");
        CHECK(run.exit_code == 3);
        CHECK(run.stderr_text.find("numerical failure") != std::string::npos);
    }
    SUBCASE("weak-probe warning goes to stderr") {
        std::string text = tiny_scenario();
        const auto pos = text.find("rabi_p_mhz = 3");
        text.replace(pos, std::strlen("rabi_p_mhz = 3"), "rabi_p_mhz = 30");
        const fs::path scenario = write_scenario(text, "warn.ini");
        const CliRun run = run_cli(
            "chi --scenario " + scenario.string() + " --out -", "warn");
        CHECK(run.exit_code == 0);
        CHECK(run.stderr_text.find("warning") != std::string::npos);
    }
}
