#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eigsim/sweep.hpp"

namespace eigsim {

// Sweep extents in internal units (rad/s, m^-3).
struct SweepSpec {
    double delta_p_min = 0.0, delta_p_max = 0.0, delta_p_step = 0.0;
    std::vector<double> delta_c_list;
    double delta_c_min = 0.0, delta_c_max = 0.0, delta_c_step = 0.0;
    std::vector<double> density_list;

    std::vector<double> delta_p_grid() const;
    std::vector<double> delta_c_grid() const; // scan axis
};

// A fully resolved run configuration: physical parameters, constants,
// numerical policy, and sweep extents, all in internal units.
struct Scenario {
    SystemParams params;
    PhysicalConstants constants;
    SolveOptions options;
    SweepSpec sweep;
    std::vector<std::string> warnings;
};

// Parses the nested-section key-value scenario format. Frequencies are
// plain MHz (multiplied by 2*pi*1e6 at this boundary), lengths cm, angles
// degrees, temperature Celsius, density m^-3. Unknown sections or keys are
// rejected with the offending name. `origin` names the source in errors.
Scenario parse_scenario(std::istream& in, const std::string& origin);
Scenario load_scenario(const std::string& path);

// Round-trip JSON serialization of SystemParams (bit-exact doubles).
std::string params_to_json(const SystemParams& p);
SystemParams params_from_json(const std::string& text);

// "key = value" lines describing the resolved configuration, embedded in
// every output file header.
std::vector<std::pair<std::string, std::string>> describe(const Scenario& s);

} // namespace eigsim
