/**
 * @file scenario.hpp
 * @brief Scenario configuration, the three reference presets and the config
 *        file reader.
 *
 * Config files are flat INI-like text:
 *
 *   # comment
 *   [section]
 *   key = value
 *
 * Schedules are written as "t0 v0; t1 v1; ...". Point lists (the ground
 * surface) use the same syntax with (x, z) pairs.
 */
#pragma once

#include "constitutive.hpp"
#include "coupling.hpp"
#include "mesh.hpp"
#include "schedule.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cflow {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
    std::string name = "custom";

    // geometry and mesh
    std::string mesh_path;  ///< empty: use the structured generator
    DomainGeometry geometry;
    double mesh_h = 0.1;
    double surface_band = 0.0;

    HaverkampSoil soil;
    double strickler = 60.0;
    double water_table = 0.0;  ///< initial hydrostatic level (m)

    Schedule rain{0.0};  ///< intensity r(t) >= 0 (m/s), v_r . n = -r
    Schedule h_A{0.0};   ///< upstream depth at A (m)

    /// v_N = coefficient * scale * (x - x0)(x - x1) * ramp(t) on BOTTOM_L faces.
    double injection_coefficient = 0.0;
    double injection_scale = 1.0;
    double injection_x0 = 0.0;
    double injection_x1 = 1.0;
    Schedule injection_ramp{0.0};

    double T = 1.0;
    double dt = 1.0;
    int substeps = 1;
    double eta = 10.0;
    double eps_alg1 = 1e-6;
    int max_iters = 50;
    CouplingMode mode = CouplingMode::two_step;
    int output_interval = 1;    ///< surface CSV every k steps
    int snapshot_interval = 0;  ///< field snapshots every k steps (0: first and last only)
    double h_max = 0.0;         ///< CFL depth bound, 0 selects the default rule
    double rho = 1000.0;

    int num_steps() const {
        const double ratio = T / dt;
        const long n = std::lround(ratio);
        if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
            throw ConfigError("T / dt must be a positive integer (T = " + std::to_string(T) +
                              ", dt = " + std::to_string(dt) + ")");
        }
        return static_cast<int>(n);
    }

    double dt_sub() const { return dt / substeps; }

    WallVelocity wall_velocity() const {
        if (injection_coefficient == 0.0) return {};
        const double c = injection_coefficient * injection_scale;
        const double x0 = injection_x0;
        const double x1 = injection_x1;
        const Schedule ramp = injection_ramp;
        const std::optional<double> split = geometry.bottom_split;
        const double bottom = geometry.bottom_z;
        return [c, x0, x1, ramp, split, bottom](Point p, double t) {
            const bool on_bottom = std::abs(p.z - bottom) < 1e-9;
            const bool left = !split || p.x <= *split;
            if (!on_bottom || !left || p.x < x0 || p.x > x1) return 0.0;
            return c * (p.x - x0) * (p.x - x1) * ramp(t);
        };
    }

    void validate() const {
        soil.validate();
        num_steps();
        if (substeps < 1) throw ConfigError("substeps must be a positive integer");
        if (!(dt > 0.0)) throw ConfigError("dt must be positive");
        if (!(eta > 0.0)) throw ConfigError("eta must be positive");
        if (!(eps_alg1 > 0.0)) throw ConfigError("eps_alg1 must be positive");
        if (max_iters < 1) throw ConfigError("max_iters must be positive");
        if (!(strickler > 0.0)) throw ConfigError("strickler must be positive");
        if (mesh_path.empty() && geometry.top.size() < 2) throw ConfigError("geometry needs a top polyline");
        if (output_interval < 1) throw ConfigError("output_interval must be positive");
        if (snapshot_interval < 0) throw ConfigError("snapshot_interval must be nonnegative");
        for (const auto& p : rain.points()) {
            if (p.second < 0.0) throw ConfigError("rain intensity must be nonnegative");
        }
        for (const auto& p : h_A.points()) {
            if (p.second < 0.0) throw ConfigError("h_A must be nonnegative");
        }
    }
};

// ---------------------------------------------------------------------------

/// Outlet-driven exfiltration on a gently sloped 3 m strip.
inline ScenarioConfig preset_tc1() {
    ScenarioConfig c;
    c.name = "tc1";
    c.geometry.top = {{0.0, 0.3034}, {1.4, 0.3020}, {1.6, 0.3014}, {3.0, 0.3}};
    c.geometry.bottom_z = 0.0;
    c.mesh_h = 0.05;
    c.surface_band = 0.05;
    c.water_table = 0.3025;
    c.T = 300.0;
    c.dt = 2.5;
    c.substeps = 10;
    c.h_max = 0.005;
    return c;
}

/// Rainfall on a 6 m x 1 m hillslope, stopped after three minutes.
inline ScenarioConfig preset_tc2() {
    ScenarioConfig c;
    c.name = "tc2";
    c.geometry.top = {{0.0, 1.03}, {6.0, 1.0}};
    c.geometry.bottom_z = 0.0;
    c.mesh_h = 0.1;
    c.surface_band = 0.3;
    c.water_table = 0.85;
    c.rain = Schedule({{0.0, 1e-5}, {180.0, 1e-5}, {180.0, 0.0}});
    c.T = 360.0;
    c.dt = 1.0;
    c.substeps = 1;
    c.h_max = 1.5e-3;
    return c;
}

/// Bottom injection on a 2 m x 0.2 m strip producing exfiltration.
inline ScenarioConfig preset_tc3() {
    ScenarioConfig c;
    c.name = "tc3";
    c.geometry.top = {{0.0, 0.204}, {2.0, 0.2}};
    c.geometry.bottom_z = 0.0;
    c.geometry.bottom_split = 1.0;
    c.mesh_h = 0.05;
    c.surface_band = 0.05;
    c.water_table = 0.1;
    c.injection_coefficient = 0.03 * c.soil.K_s;
    c.injection_x0 = 0.0;
    c.injection_x1 = 1.0;
    c.injection_ramp = Schedule({{0.0, 0.0}, {10.0, 1.0}, {120.0, 1.0}, {120.0, 0.0}});
    c.T = 360.0;
    c.dt = 1.0;
    c.substeps = 1;
    c.h_max = 1e-3;
    return c;
}

inline ScenarioConfig preset(const std::string& name) {
    if (name == "tc1") return preset_tc1();
    if (name == "tc2") return preset_tc2();
    if (name == "tc3") return preset_tc3();
    throw ConfigError("unknown preset '" + name + "' (expected tc1, tc2 or tc3)");
}

// ---------------------------------------------------------------------------

/// Section -> key -> raw value, in file order of first appearance per section.
using ConfigTable = std::map<std::string, std::map<std::string, std::string>>;

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline ConfigTable parse_config_table(std::istream& in) {
    ConfigTable table;
    std::string line;
    std::string section;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError("config line " + std::to_string(number) + ": bad section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(number) + ": expected 'key = value'");
        }
        if (section.empty()) {
            throw ConfigError("config line " + std::to_string(number) + ": key outside a section");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
        if (table[section].count(key)) {
            throw ConfigError("config line " + std::to_string(number) + ": duplicate key '" + key + "'");
        }
        table[section][key] = value;
    }
    return table;
}

namespace detail {

inline double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
    }
}

inline int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d)) throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
    return static_cast<int>(d);
}

inline std::vector<Point> to_points(const std::string& key, const std::string& v) {
    try {
        std::vector<Point> out;
        const Schedule pts = Schedule::parse(v);
        for (const auto& [x, z] : pts.points()) out.push_back({x, z});
        if (out.size() < 2) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects 'x0 z0; x1 z1; ...', got '" + v + "'");
    }
}

inline Schedule to_schedule(const std::string& key, const std::string& v) {
    try {
        return Schedule::parse(v);
    } catch (const std::exception& e) {
        throw ConfigError("'" + key + "': " + e.what());
    }
}

inline CouplingMode to_mode(const std::string& v) {
    if (v == "single" || v == "single_step") return CouplingMode::single_step;
    if (v == "two" || v == "two_step") return CouplingMode::two_step;
    throw ConfigError("mode must be 'single' or 'two', got '" + v + "'");
}

}  // namespace detail

/// Applies a parsed table on top of `base`. Unknown keys are errors.
inline ScenarioConfig apply_config(ScenarioConfig c, const ConfigTable& table) {
    using namespace detail;
    for (const auto& [section, entries] : table) {
        for (const auto& [key, v] : entries) {
            const std::string k = section + "." + key;
            if (k == "run.name") c.name = v;
            else if (k == "run.preset") {}  // handled by load_config
            else if (k == "run.T") c.T = to_double(k, v);
            else if (k == "run.dt") c.dt = to_double(k, v);
            else if (k == "run.substeps") c.substeps = to_int(k, v);
            else if (k == "run.mode") c.mode = to_mode(v);
            else if (k == "run.output_interval") c.output_interval = to_int(k, v);
            else if (k == "run.snapshot_interval") c.snapshot_interval = to_int(k, v);
            else if (k == "mesh.path") c.mesh_path = v;
            else if (k == "mesh.h") c.mesh_h = to_double(k, v);
            else if (k == "mesh.surface_band") c.surface_band = to_double(k, v);
            else if (k == "mesh.top") c.geometry.top = to_points(k, v);
            else if (k == "mesh.bottom_z") c.geometry.bottom_z = to_double(k, v);
            else if (k == "mesh.bottom_split") c.geometry.bottom_split = to_double(k, v);
            else if (k == "soil.theta_s") c.soil.theta_s = to_double(k, v);
            else if (k == "soil.theta_r") c.soil.theta_r = to_double(k, v);
            else if (k == "soil.alpha") c.soil.alpha = to_double(k, v);
            else if (k == "soil.beta") c.soil.beta = to_double(k, v);
            else if (k == "soil.K_s") c.soil.K_s = to_double(k, v);
            else if (k == "soil.A") c.soil.A = to_double(k, v);
            else if (k == "soil.gamma") c.soil.gamma = to_double(k, v);
            else if (k == "surface.strickler") c.strickler = to_double(k, v);
            else if (k == "surface.h_max") c.h_max = to_double(k, v);
            else if (k == "surface.h_A") c.h_A = to_schedule(k, v);
            else if (k == "initial.water_table") c.water_table = to_double(k, v);
            else if (k == "boundary.rain") c.rain = to_schedule(k, v);
            else if (k == "boundary.injection_coefficient") c.injection_coefficient = to_double(k, v);
            else if (k == "boundary.injection_scale") c.injection_scale = to_double(k, v);
            else if (k == "boundary.injection_x0") c.injection_x0 = to_double(k, v);
            else if (k == "boundary.injection_x1") c.injection_x1 = to_double(k, v);
            else if (k == "boundary.injection_ramp") c.injection_ramp = to_schedule(k, v);
            else if (k == "solver.eta") c.eta = to_double(k, v);
            else if (k == "solver.eps_alg1") c.eps_alg1 = to_double(k, v);
            else if (k == "solver.max_iters") c.max_iters = to_int(k, v);
            else if (k == "output.rho") c.rho = to_double(k, v);
            else throw ConfigError("unknown config key '" + k + "'");
        }
    }
    return c;
}

/// Reads a config; the preset (argument, else [run] preset) supplies defaults.
inline ScenarioConfig load_config(std::istream& in, const std::string& preset_name = {}) {
    const ConfigTable table = parse_config_table(in);
    std::string base = preset_name;
    if (base.empty()) {
        const auto run = table.find("run");
        if (run != table.end()) {
            const auto p = run->second.find("preset");
            if (p != run->second.end()) base = p->second;
        }
    }
    ScenarioConfig c = base.empty() ? ScenarioConfig{} : preset(base);
    c = apply_config(std::move(c), table);
    c.validate();
    return c;
}

inline ScenarioConfig load_config_file(const std::string& path, const std::string& preset_name = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return load_config(in, preset_name);
}

/// Writes the config back in the file grammar.
inline std::string to_config_text(const ScenarioConfig& c) {
    std::ostringstream o;
    o.precision(17);
    const auto points = [](const std::vector<Point>& pts) {
        std::ostringstream s;
        s.precision(17);
        for (std::size_t k = 0; k < pts.size(); ++k) s << (k ? "; " : "") << pts[k].x << ' ' << pts[k].z;
        return s.str();
    };
    o << "[run]\nname = " << c.name << "\nT = " << c.T << "\ndt = " << c.dt
      << "\nsubsteps = " << c.substeps << "\nmode = " << mode_name(c.mode)
      << "\noutput_interval = " << c.output_interval << "\nsnapshot_interval = " << c.snapshot_interval
      << "\n\n[mesh]\n";
    if (!c.mesh_path.empty()) o << "path = " << c.mesh_path << '\n';
    o << "h = " << c.mesh_h << "\nsurface_band = " << c.surface_band << "\ntop = " << points(c.geometry.top)
      << "\nbottom_z = " << c.geometry.bottom_z << '\n';
    if (c.geometry.bottom_split) o << "bottom_split = " << *c.geometry.bottom_split << '\n';
    o << "\n[soil]\ntheta_s = " << c.soil.theta_s << "\ntheta_r = " << c.soil.theta_r
      << "\nalpha = " << c.soil.alpha << "\nbeta = " << c.soil.beta << "\nK_s = " << c.soil.K_s
      << "\nA = " << c.soil.A << "\ngamma = " << c.soil.gamma << "\n\n[surface]\nstrickler = " << c.strickler
      << "\nh_max = " << c.h_max << "\nh_A = " << c.h_A.to_string() << "\n\n[initial]\nwater_table = "
      << c.water_table << "\n\n[boundary]\nrain = " << c.rain.to_string()
      << "\ninjection_coefficient = " << c.injection_coefficient
      << "\ninjection_scale = " << c.injection_scale << "\ninjection_x0 = " << c.injection_x0
      << "\ninjection_x1 = " << c.injection_x1 << "\ninjection_ramp = " << c.injection_ramp.to_string()
      << "\n\n[solver]\neta = " << c.eta << "\neps_alg1 = " << c.eps_alg1 << "\nmax_iters = " << c.max_iters
      << "\n\n[output]\nrho = " << c.rho << '\n';
    return o.str();
}

}  // namespace cflow
