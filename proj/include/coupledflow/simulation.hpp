/**
 * @file simulation.hpp
 * @brief End-to-end driver: mesh, initial state, macro-step loop, ledger
 *        and file outputs.
 */
#pragma once

#include "coupling.hpp"
#include "kinematic_wave.hpp"
#include "mass_audit.hpp"
#include "mesh_generator.hpp"
#include "scenario.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef COUPLEDFLOW_VERSION
#define COUPLEDFLOW_VERSION "0.1.0"
#endif

namespace cflow {

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Compact per-step record kept for diagnostics and acceptance checks.
struct StepRecord {
    int step = 0;
    double time = 0.0;
    int passes = 0;
    int newton_iterations = 0;
    double final_E = 0.0;
    bool converged = false;
    std::size_t n_wet = 0;
    std::size_t n_dry = 0;
    double min_h = 0.0;
    double max_h = 0.0;
    double max_wet_deviation = 0.0;
    double max_admissible_gap = 0.0;
    std::vector<double> vstar_mean;  ///< per interface cell
    std::vector<bool> dry;
};

struct RunOptions {
    std::string outdir;                   ///< empty: no files written
    std::string mesh_path_override;
    std::function<void(const StepResult&)> on_step;
};

struct RunResult {
    ScenarioConfig config;
    std::size_t num_triangles = 0;
    std::size_t num_interface_cells = 0;
    std::vector<double> cell_centers;
    MassLedger ledger{CouplingMode::single_step, 1.0};
    std::vector<StepRecord> steps;
    Vector psi_final;
    std::vector<double> h_final;
    double telescoping_residual = 0.0;
    double h_max_used = 0.0;
};

inline TriMesh build_mesh(const ScenarioConfig& c, const std::string& override_path = {}) {
    const std::string path = override_path.empty() ? c.mesh_path : override_path;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw SimulationError("cannot open mesh file '" + path + "'");
        return load_mesh(in);
    }
    return generate_structured_mesh({c.geometry, c.mesh_h, c.surface_band});
}

/// Initial surface depth (water_table - z)^+ at cell midpoints.
inline std::vector<double> initial_depth(const ScenarioConfig& c, const InterfaceGrid& grid) {
    std::vector<double> h(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) h[i] = std::max(c.water_table - grid[i].center.z, 0.0);
    return h;
}

/// The configured h_max, or twice the largest initial/upstream depth.
inline double resolve_h_max(const ScenarioConfig& c, const std::vector<double>& h0) {
    if (c.h_max > 0.0) return c.h_max;
    double m = c.h_A.max_abs();
    for (double v : h0) m = std::max(m, v);
    if (!(m > 0.0)) {
        throw ConfigError("h_max cannot be derived from zero initial and upstream depth; set [surface] h_max");
    }
    return 2.0 * m;
}

namespace detail {

inline void write_manifest(const std::filesystem::path& dir, const ScenarioConfig& c,
                           const TriMesh& mesh, const InterfaceGrid& grid, double h_max) {
    std::ofstream m(dir / "manifest.txt");
    m << "# coupledflow run manifest\n";
    m << "# coupledflow " << COUPLEDFLOW_VERSION << ", Eigen " << EIGEN_WORLD_VERSION << '.'
      << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION << ", compiler " << __VERSION__ << '\n';
    m << "# triangles " << mesh.num_triangles() << ", faces " << mesh.num_faces()
      << ", interface cells " << grid.size() << ", steps " << c.num_steps() << ", h_max " << h_max
      << ", CFL bound " << cfl_max_substep(grid, h_max, c.strickler) << " s\n";
    m << to_config_text(c);
}

inline void write_snapshot(const std::filesystem::path& dir, int step, const DgSpace& space,
                           const HaverkampSoil& soil, const Vector& psi) {
    std::ofstream out(dir / ("psi_" + std::to_string(step) + ".dat"));
    write_field_snapshot(out, space, soil, psi);
}

}  // namespace detail

/// Runs the configured scenario. Throws on solver failure, CFL violation,
/// a posteriori h_max violation or a broken ledger identity.
inline RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {}) {
    config.validate();
    const TriMesh mesh = build_mesh(config, options.mesh_path_override);
    const InterfaceGrid grid = extract_interface_grid(mesh);
    const DgSpace space(mesh);
    const HaverkampSoil& soil = config.soil;
    const int steps = config.num_steps();

    RunResult result;
    result.config = config;
    result.num_triangles = mesh.num_triangles();
    result.num_interface_cells = grid.size();
    for (const auto& c : grid) result.cell_centers.push_back(c.center.x);

    std::vector<double> h = initial_depth(config, grid);
    const double h_max = resolve_h_max(config, h);
    result.h_max_used = h_max;
    const double bound = cfl_max_substep(grid, h_max, config.strickler);
    if (config.dt_sub() > bound * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "CFL violated: dt' = " << config.dt_sub() << " s exceeds " << bound << " s for h_max = " << h_max;
        throw CflError(msg.str());
    }

    CoupledProblem prob;
    prob.space = &space;
    prob.soil = &soil;
    prob.grid = &grid;
    prob.settings.dt = config.dt;
    prob.settings.substeps = config.substeps;
    prob.settings.strickler = config.strickler;
    prob.settings.eta = config.eta;
    prob.settings.cfl_h_max = 0.0;  // checked once above
    prob.settings.newton = {config.eps_alg1, config.max_iters};
    prob.rain = config.rain;
    prob.h_A = config.h_A;
    prob.wall_velocity = config.wall_velocity();

    const double wt = config.water_table;
    StateHistory history(3);
    history.push({space.interpolate([wt](Point p) { return wt - p.z; }), 0, 0.0});

    result.ledger = MassLedger(config.mode, config.dt, config.rho);
    result.ledger.set_initial(groundwater_volume(space, soil, history.latest().psi), overland_volume(h, grid));

    std::optional<std::filesystem::path> dir;
    std::ofstream mass_csv, solver_csv, coupling_csv, surface_csv;
    if (!options.outdir.empty()) {
        dir = options.outdir;
        std::filesystem::create_directories(*dir);
        detail::write_manifest(*dir, config, mesh, grid, h_max);
        mass_csv.open(*dir / "mass.csv");
        solver_csv.open(*dir / "solver_log.csv");
        coupling_csv.open(*dir / "coupling_log.csv");
        surface_csv.open(*dir / "surface.csv");
        if (!mass_csv || !solver_csv || !coupling_csv || !surface_csv) {
            throw SimulationError("cannot write outputs in '" + options.outdir + "'");
        }
        for (auto* f : {&mass_csv, &solver_csv, &coupling_csv, &surface_csv}) f->precision(12);
        MassLedger::write_header(mass_csv);
        MassLedger::write_row(mass_csv, result.ledger.rows().front());
        solver_csv << "step,time,iterations,final_E,converged\n";
        coupling_csv << "step,time,iterations,n_wet,n_dry,F_I,Phi_I\n";
        surface_csv << "time,i,x_i,h_i,q_i,vstar_i\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            surface_csv << 0.0 << ',' << i << ',' << grid[i].center.x << ',' << h[i] << ','
                        << manning_flux(h[i], grid[i].slope, config.strickler) << ',' << 0.0 << '\n';
        }
        detail::write_snapshot(*dir, 0, space, soil, history.latest().psi);
    }

    SparseDirectSolver solver;
    CouplingMemory memory;
    for (int n = 1; n <= steps; ++n) {
        StepResult s = coupled_step(prob, config.mode, n, history, h, memory, solver);
        double hmin = s.h.empty() ? 0.0 : s.h.front();
        double hmax = 0.0;
        for (double v : s.h) {
            hmin = std::min(hmin, v);
            hmax = std::max(hmax, v);
        }
        if (hmin < 0.0) throw SimulationError("negative depth accepted at step " + std::to_string(n));
        if (hmax > h_max) {
            std::ostringstream msg;
            msg << "surface depth " << hmax << " m at step " << n << " exceeds h_max = " << h_max
                << " m used for the CFL check; raise [surface] h_max and reduce dt'";
            throw CflError(msg.str());
        }
        h = s.h;
        history.push({s.psi, n, s.time});
        const MassRow& row = result.ledger.record(s, groundwater_volume(space, soil, s.psi),
                                                  overland_volume(h, grid), grid);

        StepRecord rec;
        rec.step = n;
        rec.time = s.time;
        rec.passes = s.passes;
        rec.newton_iterations = s.newton_iterations;
        rec.final_E = s.report.final_error;
        rec.converged = s.report.converged;
        rec.n_wet = s.partition.n_wet();
        rec.n_dry = s.partition.n_dry();
        rec.min_h = hmin;
        rec.max_h = hmax;
        rec.max_wet_deviation = s.max_wet_deviation;
        rec.max_admissible_gap = s.max_admissible_gap;
        rec.dry = s.partition.dry;
        for (const auto& v : s.vstar) rec.vstar_mean.push_back(0.5 * (v[0] + v[1]));

        if (dir) {
            MassLedger::write_row(mass_csv, row);
            solver_csv << n << ',' << s.time << ',' << s.report.iterations << ',' << s.report.final_error
                       << ',' << (s.report.converged ? 1 : 0) << '\n';
            coupling_csv << n << ',' << s.time << ',' << s.passes << ',' << rec.n_wet << ',' << rec.n_dry
                         << ',' << s.F_I << ',' << s.Phi_I << '\n';
            if (n % config.output_interval == 0 || n == steps) {
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    surface_csv << s.time << ',' << i << ',' << grid[i].center.x << ',' << h[i] << ','
                                << manning_flux(h[i], grid[i].slope, config.strickler) << ','
                                << rec.vstar_mean[i] << '\n';
                }
            }
            const bool snap = config.snapshot_interval > 0 ? n % config.snapshot_interval == 0 : n == steps;
            if (snap || n == steps) detail::write_snapshot(*dir, n, space, soil, s.psi);
        }
        if (options.on_step) options.on_step(s);
        memory = std::move(s.memory);
        result.steps.push_back(std::move(rec));
    }

    result.telescoping_residual = result.ledger.telescoping_residual();
    if (!(result.telescoping_residual <= 1e-10)) {
        throw SimulationError("ledger telescoping identity violated (relative residual " +
                              std::to_string(result.telescoping_residual) + ")");
    }
    result.psi_final = history.latest().psi;
    result.h_final = h;
    return result;
}

}  // namespace cflow
