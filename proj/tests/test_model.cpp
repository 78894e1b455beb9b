#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include "eigsim/config.hpp"
#include "eigsim/errors.hpp"
#include "oracles.hpp"

using namespace eigsim;
using oracles::kMHz;

namespace {

std::string scenario_text(const std::string& patch_section = "",
                          const std::string& patch_line = "") {
    std::ostringstream out;
    out << "[atom]\n"
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
           "[medium]\n"
           "density_m3 = 1e15\n"
           "length_cm = 7.5\n"
           "temperature_c = 43\n"
           "[numerics]\n"
           "[sweep]\n"
           "delta_p_min_mhz = -40\n"
           "delta_p_max_mhz = 40\n"
           "delta_p_step_mhz = 0.1\n";
    std::string text = out.str();
    if (!patch_section.empty()) {
        const auto pos = text.find(patch_section);
        REQUIRE(pos != std::string::npos);
        text.insert(pos + patch_section.size() + 1, patch_line + "\n");
    }
    return text;
}

Scenario parse(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in, "<test>");
}

} // namespace

TEST_CASE("config MHz values become angular frequencies") {
    const Scenario s = parse(scenario_text());
    CHECK(s.params.gamma_a == doctest::Approx(2.0 * std::numbers::pi * 4.6e6).epsilon(1e-12));
    CHECK(s.params.rabi_c1 == doctest::Approx(50.0 * kMHz).epsilon(1e-12));
    CHECK(s.params.delta_c == doctest::Approx(-11.0 * kMHz).epsilon(1e-12));
    CHECK(s.params.length == doctest::Approx(0.075).epsilon(1e-12));
    CHECK(s.params.temperature == doctest::Approx(316.15).epsilon(1e-12));
    CHECK(s.params.theta ==
          doctest::Approx(0.14 * std::numbers::pi / 180.0).epsilon(1e-12));
}

TEST_CASE("omitted gamma_ab defaults to half gamma_a") {
    const Scenario s = parse(scenario_text());
    CHECK(s.params.gamma_ab == doctest::Approx(0.5 * s.params.gamma_a).epsilon(1e-15));

    const Scenario explicit_value =
        parse(scenario_text("[atom]", "gamma_ab_mhz = 1.0"));
    CHECK(explicit_value.params.gamma_ab == doctest::Approx(1.0 * kMHz));
}

TEST_CASE("omitted window_loss defaults to the measured 4%") {
    CHECK(parse(scenario_text()).params.window_loss == doctest::Approx(0.04));
}

TEST_CASE("validation rejects bad inputs") {
    CHECK_THROWS_AS(parse(scenario_text("[medium]", "density_m3 = -1")),
                    ConfigError);
    CHECK_THROWS_AS(parse(scenario_text("[medium]", "window_loss = 1.0")),
                    ConfigError);
    SystemParams p = oracles::canonical_params();
    p.gamma_cb = 0.0;
    CHECK_THROWS_AS(validate(p), ConfigError);
    p = oracles::canonical_params();
    p.theta = 2.0;
    CHECK_THROWS_AS(validate(p), ConfigError);
}

TEST_CASE("missing and unknown keys are reported by name") {
    std::string text = scenario_text();
    const auto pos = text.find("rabi_p_mhz = 3\n");
    text.erase(pos, std::strlen("rabi_p_mhz = 3\n"));
    try {
        parse(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("fields.rabi_p_mhz") !=
              std::string::npos);
    }

    try {
        parse(scenario_text("[medium]", "pressure_torr = 1"));
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("medium.pressure_torr") !=
              std::string::npos);
    }

    CHECK_THROWS_AS(parse(scenario_text() + "[oven]\nsetpoint = 1\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse(scenario_text("[atom]", "gamma_a_mhz = 5")),
                    ConfigError); // duplicate
}

TEST_CASE("weak-probe warning threshold") {
    SystemParams p = oracles::canonical_params();
    CHECK(lint(p).empty());
    p.rabi_p = 0.4 * p.rabi_c1;
    CHECK(lint(p).size() == 1);
}

TEST_CASE("derived frequencies") {
    const PhysicalConstants c;
    SystemParams p = oracles::canonical_params();

    SUBCASE("coupling sits one hyperfine splitting above the probe") {
        p.delta_p = 0.0;
        p.delta_c = 0.0;
        const DerivedFrequencies f = derive_frequencies(p, c);
        CHECK(f.omega_c - f.omega_p ==
              doctest::Approx(9200.0 * kMHz).epsilon(1e-9));
    }
    SUBCASE("equal detunings give zero two-photon detuning") {
        p.delta_p = -11.0 * kMHz;
        p.delta_c = -11.0 * kMHz;
        CHECK(derive_frequencies(p, c).two_photon == 0.0);
    }
    SUBCASE("probe wavevector matches 2 pi / lambda") {
        p.delta_p = 0.0;
        const DerivedFrequencies f = derive_frequencies(p, c);
        CHECK(f.k_p == doctest::Approx(2.0 * std::numbers::pi / c.wavelength)
                           .epsilon(1e-12));
        CHECK(f.k_p == doctest::Approx(7.0236e6).epsilon(1e-4));
    }
    SUBCASE("omega_c > omega_p whenever the split dominates the detunings") {
        std::mt19937 rng(81);
        std::uniform_real_distribution<double> det(-100.0 * kMHz, 100.0 * kMHz);
        for (int i = 0; i < 200; ++i) {
            p.delta_p = det(rng);
            p.delta_c = det(rng);
            if (p.hyperfine_split > std::abs(p.delta_c - p.delta_p)) {
                const DerivedFrequencies f = derive_frequencies(p, c);
                CHECK(f.omega_c > f.omega_p);
            }
        }
    }
    SUBCASE("two-photon detuning is antisymmetric under detuning swap") {
        std::mt19937 rng(82);
        std::uniform_real_distribution<double> det(-50.0 * kMHz, 50.0 * kMHz);
        for (int i = 0; i < 100; ++i) {
            const double a = det(rng), b = det(rng);
            p.delta_p = a;
            p.delta_c = b;
            const double fwd = derive_frequencies(p, c).two_photon;
            p.delta_p = b;
            p.delta_c = a;
            CHECK(derive_frequencies(p, c).two_photon == -fwd);
        }
    }
}

TEST_CASE("JSON round-trip is bit exact") {
    std::mt19937 rng(83);
    std::uniform_real_distribution<double> uni(1e-7, 1e9);
    for (int i = 0; i < 50; ++i) {
        SystemParams p;
        p.gamma_a = uni(rng);
        p.gamma_ab = uni(rng);
        p.gamma_cb = uni(rng);
        p.rabi_p = uni(rng);
        p.rabi_c1 = uni(rng);
        p.rabi_c2 = uni(rng);
        p.delta_p = uni(rng) - 5e8;
        p.delta_c = uni(rng) - 5e8;
        p.hyperfine_split = uni(rng);
        p.density = uni(rng) * 1e8;
        p.length = uni(rng) * 1e-9;
        p.theta = 1e-3;
        p.temperature = 300.0 + uni(rng) * 1e-7;
        p.window_loss = 0.25;
        const SystemParams q = params_from_json(params_to_json(p));
        CHECK(std::memcmp(&p, &q, sizeof p) == 0);
    }
}

TEST_CASE("constants must be strictly positive") {
    PhysicalConstants c;
    CHECK_NOTHROW(c.validate());
    c.dipole_moment = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}
