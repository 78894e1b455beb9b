#include "eigsim/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eigsim/errors.hpp"
#include "eigsim/table.hpp"

namespace eigsim {

namespace {

constexpr double kMHz = 2.0 * std::numbers::pi * 1e6; // linear MHz -> rad/s

struct IniDocument {
    // section -> key -> value, plus locations for error reporting
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string origin;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

IniDocument read_ini(std::istream& in, const std::string& origin) {
    IniDocument doc;
    doc.origin = origin;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            doc.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": key '" + key + "' outside any section");
        if (!doc.sections[section].emplace(key, value).second)
            throw ConfigError(origin + ": duplicate key '" + section + "." +
                              key + "'");
    }
    return doc;
}

double parse_double(const std::string& text, const std::string& where) {
    try {
        size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size() || !std::isfinite(v)) throw std::exception();
        return v;
    } catch (...) {
        throw ConfigError(where + ": cannot parse '" + text + "' as a number");
    }
}

std::vector<double> parse_list(const std::string& text,
                               const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(item, where));
    }
    if (out.empty()) throw ConfigError(where + ": empty list");
    return out;
}

// Tracks consumed keys so anything left over is reported by name.
class SectionReader {
  public:
    SectionReader(const IniDocument& doc, std::string section)
        : doc_(doc), section_(std::move(section)) {
        const auto it = doc.sections.find(section_);
        if (it != doc.sections.end()) entries_ = &it->second;
    }

    bool has(const std::string& key) const {
        seen_.insert(key);
        return entries_ && entries_->count(key) > 0;
    }
    std::string raw(const std::string& key) const {
        seen_.insert(key);
        if (!entries_ || !entries_->count(key))
            throw ConfigError(doc_.origin + ": missing key '" + section_ +
                              "." + key + "'");
        return entries_->at(key);
    }
    double number(const std::string& key) const {
        return parse_double(raw(key), section_ + "." + key);
    }
    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }
    std::vector<double> list(const std::string& key) const {
        return parse_list(raw(key), section_ + "." + key);
    }
    bool flag(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string v = raw(key);
        if (v == "on" || v == "true" || v == "1") return true;
        if (v == "off" || v == "false" || v == "0") return false;
        throw ConfigError(section_ + "." + key + ": expected on/off, got '" +
                          v + "'");
    }
    void finish() const {
        if (!entries_) return;
        for (const auto& [key, value] : *entries_)
            if (!seen_.count(key))
                throw ConfigError(doc_.origin + ": unknown key '" + section_ +
                                  "." + key + "'");
    }

  private:
    const IniDocument& doc_;
    std::string section_;
    const std::map<std::string, std::string>* entries_ = nullptr;
    mutable std::set<std::string> seen_;
};

Scenario from_ini(const IniDocument& doc) {
    static const std::set<std::string> known_sections = {
        "atom", "fields", "medium", "numerics", "sweep"};
    for (const auto& [name, _] : doc.sections)
        if (!known_sections.count(name))
            throw ConfigError(doc.origin + ": unknown section '" + name + "'");

    Scenario s;

    const SectionReader atom(doc, "atom");
    s.params.gamma_a = atom.number("gamma_a_mhz") * kMHz;
    s.params.gamma_ab =
        atom.has("gamma_ab_mhz") ? atom.number("gamma_ab_mhz") * kMHz
                                 : 0.5 * s.params.gamma_a;
    s.params.gamma_cb = atom.number("gamma_cb_mhz") * kMHz;
    s.params.hyperfine_split = atom.number("hyperfine_split_mhz") * kMHz;
    s.constants.wavelength =
        atom.number_or("wavelength_nm", s.constants.wavelength * 1e9) * 1e-9;
    s.constants.atom_mass = atom.number_or("mass_kg", s.constants.atom_mass);
    s.constants.dipole_moment =
        atom.number_or("dipole_moment_cm", s.constants.dipole_moment);
    atom.finish();

    const SectionReader fields(doc, "fields");
    s.params.rabi_p = fields.number("rabi_p_mhz") * kMHz;
    s.params.rabi_c1 = fields.number("rabi_c1_mhz") * kMHz;
    s.params.rabi_c2 = fields.number("rabi_c2_mhz") * kMHz;
    s.params.delta_p = fields.number("delta_p_mhz") * kMHz;
    s.params.delta_c = fields.number("delta_c_mhz") * kMHz;
    s.params.theta = fields.number("theta_deg") * std::numbers::pi / 180.0;
    fields.finish();

    const SectionReader medium(doc, "medium");
    s.params.density = medium.number("density_m3");
    s.params.length = medium.number("length_cm") * 1e-2;
    s.params.temperature = medium.number("temperature_c") + 273.15;
    s.params.window_loss = medium.number_or("window_loss", 0.04);
    medium.finish();

    const SectionReader numerics(doc, "numerics");
    s.options.n_max = static_cast<int>(numerics.number_or("n_max", 0));
    s.options.truncation_tol = numerics.number_or("truncation_tol", 1e-4);
    s.options.n_cap = static_cast<int>(numerics.number_or("n_cap", 512));
    s.options.velocity_nodes =
        static_cast<int>(numerics.number_or("velocity_nodes", 64));
    if (numerics.has("velocity_scheme")) {
        const std::string scheme = numerics.raw("velocity_scheme");
        if (scheme == "gauss_hermite")
            s.options.scheme = VelocityScheme::gauss_hermite;
        else if (scheme == "uniform_trapezoid")
            s.options.scheme = VelocityScheme::uniform_trapezoid;
        else
            throw ConfigError("numerics.velocity_scheme: unknown scheme '" +
                              scheme + "'");
    }
    s.options.doppler = numerics.flag("doppler", true);
    s.options.threads = static_cast<int>(numerics.number_or("threads", 0));
    numerics.finish();

    const SectionReader sweep(doc, "sweep");
    s.sweep.delta_p_min = sweep.number("delta_p_min_mhz") * kMHz;
    s.sweep.delta_p_max = sweep.number("delta_p_max_mhz") * kMHz;
    s.sweep.delta_p_step = sweep.number("delta_p_step_mhz") * kMHz;
    if (sweep.has("delta_c_list_mhz")) {
        for (double v : sweep.list("delta_c_list_mhz"))
            s.sweep.delta_c_list.push_back(v * kMHz);
    } else {
        s.sweep.delta_c_list = {s.params.delta_c};
    }
    s.sweep.delta_c_min = sweep.number_or("delta_c_min_mhz", -30.0) * kMHz;
    s.sweep.delta_c_max = sweep.number_or("delta_c_max_mhz", 10.0) * kMHz;
    s.sweep.delta_c_step = sweep.number_or("delta_c_step_mhz", 1.0) * kMHz;
    if (sweep.has("density_list_m3"))
        s.sweep.density_list = sweep.list("density_list_m3");
    else
        s.sweep.density_list = {s.params.density};
    sweep.finish();

    s.constants.validate();
    validate(s.params);
    if (!(s.options.truncation_tol > 0.0))
        throw ConfigError("numerics.truncation_tol must be > 0");
    if (s.options.velocity_nodes < 1)
        throw ConfigError("numerics.velocity_nodes must be >= 1");
    if (s.options.n_max < 0 || s.options.n_cap < 4)
        throw ConfigError("numerics.n_max/n_cap out of range");
    s.warnings = lint(s.params);
    return s;
}

std::vector<double> linear_grid(double lo, double hi, double step,
                                const char* name) {
    if (!(step > 0.0))
        throw ConfigError(std::string(name) + ": step must be > 0");
    if (!(hi > lo))
        throw ConfigError(std::string(name) + ": max must exceed min");
    std::vector<double> grid;
    const auto count = static_cast<size_t>(std::floor((hi - lo) / step + 0.5));
    grid.reserve(count + 1);
    for (size_t i = 0; i <= count; ++i) grid.push_back(lo + step * i);
    return grid;
}

} // namespace

std::vector<double> SweepSpec::delta_p_grid() const {
    return linear_grid(delta_p_min, delta_p_max, delta_p_step, "sweep.delta_p");
}

std::vector<double> SweepSpec::delta_c_grid() const {
    return linear_grid(delta_c_min, delta_c_max, delta_c_step, "sweep.delta_c");
}

Scenario parse_scenario(std::istream& in, const std::string& origin) {
    return from_ini(read_ini(in, origin));
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    return parse_scenario(in, path);
}

std::string params_to_json(const SystemParams& p) {
    nlohmann::ordered_json j;
    j["gamma_a"] = p.gamma_a;
    j["gamma_ab"] = p.gamma_ab;
    j["gamma_cb"] = p.gamma_cb;
    j["rabi_p"] = p.rabi_p;
    j["rabi_c1"] = p.rabi_c1;
    j["rabi_c2"] = p.rabi_c2;
    j["delta_p"] = p.delta_p;
    j["delta_c"] = p.delta_c;
    j["hyperfine_split"] = p.hyperfine_split;
    j["density"] = p.density;
    j["length"] = p.length;
    j["theta"] = p.theta;
    j["temperature"] = p.temperature;
    j["window_loss"] = p.window_loss;
    return j.dump(2);
}

SystemParams params_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    SystemParams p;
    p.gamma_a = j.at("gamma_a");
    p.gamma_ab = j.at("gamma_ab");
    p.gamma_cb = j.at("gamma_cb");
    p.rabi_p = j.at("rabi_p");
    p.rabi_c1 = j.at("rabi_c1");
    p.rabi_c2 = j.at("rabi_c2");
    p.delta_p = j.at("delta_p");
    p.delta_c = j.at("delta_c");
    p.hyperfine_split = j.at("hyperfine_split");
    p.density = j.at("density");
    p.length = j.at("length");
    p.theta = j.at("theta");
    p.temperature = j.at("temperature");
    p.window_loss = j.at("window_loss");
    return p;
}

std::vector<std::pair<std::string, std::string>> describe(const Scenario& s) {
    std::vector<std::pair<std::string, std::string>> kv;
    auto add = [&](const std::string& k, double v) {
        kv.emplace_back(k, format_double(v));
    };
    add("gamma_a_rad_s", s.params.gamma_a);
    add("gamma_ab_rad_s", s.params.gamma_ab);
    add("gamma_cb_rad_s", s.params.gamma_cb);
    add("rabi_p_rad_s", s.params.rabi_p);
    add("rabi_c1_rad_s", s.params.rabi_c1);
    add("rabi_c2_rad_s", s.params.rabi_c2);
    add("delta_p_rad_s", s.params.delta_p);
    add("delta_c_rad_s", s.params.delta_c);
    add("hyperfine_split_rad_s", s.params.hyperfine_split);
    add("density_m3", s.params.density);
    add("length_m", s.params.length);
    add("theta_rad", s.params.theta);
    add("temperature_k", s.params.temperature);
    add("window_loss", s.params.window_loss);
    add("wavelength_m", s.constants.wavelength);
    add("atom_mass_kg", s.constants.atom_mass);
    add("dipole_moment_cm", s.constants.dipole_moment);
    kv.emplace_back("doppler", s.options.doppler ? "on" : "off");
    add("n_max", s.options.n_max);
    add("truncation_tol", s.options.truncation_tol);
    add("n_cap", s.options.n_cap);
    add("velocity_nodes", s.options.velocity_nodes);
    kv.emplace_back("velocity_scheme",
                    s.options.scheme == VelocityScheme::gauss_hermite
                        ? "gauss_hermite"
                        : "uniform_trapezoid");
    kv.emplace_back("window_loss_applied", s.options.window_loss ? "on" : "off");
    return kv;
}

} // namespace eigsim
