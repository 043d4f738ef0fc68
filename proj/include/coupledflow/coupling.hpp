/**
 * @file coupling.hpp
 * @brief Single-step and two-step coupling of the Richards and kinematic-wave
 *        solvers through an iteratively determined wet/dry interface partition.
 *
 * Each macro step runs the surface predictor without exchange flux, then
 * alternates Richards solves and surface updates. Wet faces receive the
 * predicted depth as a Dirichlet head; dry faces receive a Neumann velocity
 * chosen so that the corrected surface update empties the cell. Faces whose
 * updated depth is negative are moved to the dry set, which only grows, and
 * the loop stops when no face flips.
 *
 * Two-step mode keeps the blended velocity vhat^n = (2 v*^n + vhat^{n-1}) / 3
 * as memory. Its interface integral is the corrected flux
 * Phi^n = 2/3 F^n + 1/3 Phi^{n-1}, so the surface balance uses Phi exactly.
 */
#pragma once

#include "kinematic_wave.hpp"
#include "richards_dg.hpp"
#include "schedule.hpp"
#include "time_stepping.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cflow {

enum class CouplingMode { single_step, two_step };

inline const char* mode_name(CouplingMode m) {
    return m == CouplingMode::single_step ? "single" : "two";
}

struct InterfacePartition {
    std::vector<bool> dry;  ///< per interface cell, grid order
    int iteration = 1;
    int last_flips = 0;

    static InterfacePartition all_wet(std::size_t n) { return {std::vector<bool>(n, false), 1, 0}; }
    std::size_t size() const { return dry.size(); }
    std::size_t n_dry() const {
        std::size_t k = 0;
        for (bool d : dry) k += d ? 1 : 0;
        return k;
    }
    std::size_t n_wet() const { return size() - n_dry(); }
    bool is_wet(std::size_t i) const { return !dry[i]; }
};

/// Faces with a negative depth signal join the dry set; dry faces stay dry.
inline InterfacePartition update_partition(const InterfacePartition& current,
                                           const std::vector<double>& h_signal) {
    if (h_signal.size() != current.size()) {
        throw std::invalid_argument("update_partition: signal size mismatch");
    }
    InterfacePartition next = current;
    next.iteration = current.iteration + 1;
    next.last_flips = 0;
    for (std::size_t i = 0; i < h_signal.size(); ++i) {
        if (!next.dry[i] && h_signal[i] < 0.0) {
            next.dry[i] = true;
            ++next.last_flips;
        }
    }
    return next;
}

struct CouplingMemory {
    std::vector<FaceValues> vhat;  ///< blended interface velocity of level n-1
    double Phi = 0.0;              ///< corrected interface flux of level n-1
    double FWB_tilde = 0.0;        ///< corrected wall/bottom flux of level n-1
    bool initialized = false;
};

/// Phi^n = 2/3 F^n + 1/3 Phi^{n-1}, and Phi^1 = F^1.
inline double corrected_interface_flux(double F, const CouplingMemory& memory) {
    if (!memory.initialized) return F;
    return 2.0 / 3.0 * F + memory.Phi / 3.0;
}

/// Wall and bottom normal velocity v_N(x, t); negative values inject water.
using WallVelocity = std::function<double(Point, double)>;

struct CouplingSettings {
    double dt = 1.0;
    int substeps = 1;
    double strickler = 60.0;
    double eta = 10.0;
    double cfl_h_max = 0.0;
    NewtonOptions newton;
};

/// Everything a macro step needs that does not change between steps.
struct CoupledProblem {
    const DgSpace* space = nullptr;
    const HaverkampSoil* soil = nullptr;
    const InterfaceGrid* grid = nullptr;
    CouplingSettings settings;
    Schedule rain;
    Schedule h_A;
    WallVelocity wall_velocity;

    std::vector<int> interface_faces() const {
        std::vector<int> out;
        for (const auto& c : *grid) out.push_back(c.face);
        return out;
    }
};

struct StepResult {
    int step = 0;
    double time = 0.0;
    Vector psi;
    std::vector<double> h;
    std::vector<double> h_tilde;
    std::vector<FaceValues> vstar;  ///< raw interface velocity (trapezoidal mean at n = 1)
    std::vector<FaceValues> vhat;   ///< velocity used in the surface update
    InterfacePartition partition;
    int passes = 0;
    int newton_iterations = 0;
    NonlinearSolveReport report;
    BoundaryData bc;
    double F_I = 0.0;
    double Phi_I = 0.0;
    double F_WB = 0.0;
    double FWB_tilde = 0.0;
    double F_A = 0.0;
    double F_B = 0.0;
    double F_r = 0.0;
    double max_wet_deviation = 0.0;   ///< max over wet faces |mean psi - omega_psi|
    double max_admissible_gap = 0.0;  ///< max over faces |h - max(mean psi, 0)|
    CouplingMemory memory;            ///< memory for the next step

    double F_ABr() const { return F_A + F_B + F_r; }
};

namespace detail {

inline FaceValues wall_values(const CoupledProblem& prob, int face, double t) {
    FaceValues v{0.0, 0.0};
    if (!prob.wall_velocity) return v;
    for (int g = 0; g < 2; ++g) v[g] = prob.wall_velocity(prob.space->face_point(face, g), t);
    return v;
}

/// Boundary data for level time t: walls/bottom from v_N, interface cells
/// Dirichlet h_tilde when wet, Neumann `dry_velocity` when dry.
inline BoundaryData build_boundary(const CoupledProblem& prob, const InterfacePartition& part,
                                   const std::vector<double>& h_tilde,
                                   const std::vector<FaceValues>& dry_velocity, double t) {
    const TriMesh& mesh = prob.space->mesh();
    BoundaryData bc;
    bc.eta = prob.settings.eta;
    bc.faces.resize(mesh.num_faces());
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const Face& face = mesh.faces()[f];
        if (face.is_boundary() && face.tag != FaceTag::interface) {
            bc.set_neumann(static_cast<int>(f), wall_values(prob, static_cast<int>(f), t));
        }
    }
    const InterfaceGrid& grid = *prob.grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (part.is_wet(i)) {
            bc.set_dirichlet(grid[i].face, {h_tilde[i], h_tilde[i]});
        } else {
            bc.set_neumann(grid[i].face, dry_velocity[i]);
        }
    }
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        if (mesh.faces()[f].is_boundary() && bc.faces[f].kind == BoundaryKind::none) {
            throw AssemblyError("boundary face " + std::to_string(f) + " has no condition");
        }
    }
    return bc;
}

inline double wall_flux(const CoupledProblem& prob, const BoundaryData& bc) {
    const TriMesh& mesh = prob.space->mesh();
    double s = 0.0;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const Face& face = mesh.faces()[f];
        if (face.is_boundary() && face.tag != FaceTag::interface) {
            s -= integrate_face(bc.faces[f].value, face.length);
        }
    }
    return s;
}

inline double interface_flux(const InterfaceGrid& grid, const std::vector<FaceValues>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) s -= integrate_face(v[i], grid[i].length);
    return s;
}

}  // namespace detail

/// One macro step n >= 1. Level n = 1 uses the trapezoidal rule with the
/// single-step Neumann rule; afterwards single-step mode uses BDF1 and
/// two-step mode BDF2 with the blended surface update.
inline StepResult coupled_step(const CoupledProblem& prob, CouplingMode mode, int n,
                               const StateHistory& history, const std::vector<double>& h_prev,
                               const CouplingMemory& memory, SparseDirectSolver& solver) {
    const DgSpace& space = *prob.space;
    const HaverkampSoil& soil = *prob.soil;
    const InterfaceGrid& grid = *prob.grid;
    const CouplingSettings& cs = prob.settings;
    const std::size_t ni = grid.size();
    const double dt = cs.dt;
    const double t_prev = (n - 1) * dt;
    const double t = n * dt;
    const bool first = n == 1;
    const bool two = mode == CouplingMode::two_step && !first;
    if (two && (!memory.initialized || memory.vhat.size() != ni)) {
        throw std::logic_error("two-step coupling needs the memory of the previous step");
    }
    if (h_prev.size() != ni) throw std::invalid_argument("surface state size mismatch");
    for (double v : h_prev) {
        if (!(v >= 0.0)) throw std::invalid_argument("surface depth must be nonnegative on entry");
    }

    SubcycleSettings ss;
    ss.strickler = cs.strickler;
    ss.substeps = cs.substeps;
    ss.dt_sub = dt / cs.substeps;
    ss.t_start = t_prev;
    ss.cfl_h_max = cs.cfl_h_max;
    const SubcycleResult pred =
        godunov_subcycle({h_prev, prob.h_A(t_prev), 0}, grid, ss, prob.rain, prob.h_A, {});

    StepResult out;
    out.step = n;
    out.time = t;
    out.h_tilde = pred.state.h;
    out.F_A = pred.F_A;
    out.F_B = pred.F_B;
    out.F_r = pred.F_r;

    std::vector<FaceValues> dry_velocity(ni);
    for (std::size_t i = 0; i < ni; ++i) {
        for (int g = 0; g < 2; ++g) {
            dry_velocity[i][g] = two ? -0.5 * (3.0 * out.h_tilde[i] / dt + memory.vhat[i][g])
                                     : -out.h_tilde[i] / dt;
        }
    }

    const std::vector<int> faces = prob.interface_faces();
    const BdfScheme scheme = bdf_coefficients(two ? 2 : 1);
    InterfacePartition part = InterfacePartition::all_wet(ni);
    const Vector guess = predictor_for_step(history, n);
    const Vector& psi_prev = history.at(1).psi;

    for (int pass = 1; pass <= static_cast<int>(ni) + 2; ++pass) {
        BoundaryData bc = detail::build_boundary(prob, part, out.h_tilde, dry_velocity, t);
        std::pair<Vector, NonlinearSolveReport> solved;
        std::vector<FaceValues> vstar;
        try {
            if (first) {
                BoundaryData bc_old = detail::build_boundary(prob, part, out.h_tilde, dry_velocity, t_prev);
                solved = crank_nicolson_first_step(space, soil, psi_prev, bc, bc_old, dt, guess,
                                                   cs.newton, solver);
                const auto v1 = reconstruct_interface_velocity(space, soil, solved.first, bc, faces);
                const auto v0 = reconstruct_interface_velocity(space, soil, psi_prev, bc_old, faces);
                vstar.resize(ni);
                for (std::size_t i = 0; i < ni; ++i) {
                    for (int g = 0; g < 2; ++g) vstar[i][g] = 0.5 * (v1[i][g] + v0[i][g]);
                }
                out.F_WB = 0.5 * (detail::wall_flux(prob, bc) + detail::wall_flux(prob, bc_old));
            } else {
                solved = nonlinear_step(space, soil, history, bc, scheme, dt, guess, cs.newton, solver);
                vstar = reconstruct_interface_velocity(space, soil, solved.first, bc, faces);
                out.F_WB = detail::wall_flux(prob, bc);
            }
        } catch (const NonConvergenceError& e) {
            throw NonConvergenceError("step " + std::to_string(n) + " (t = " + std::to_string(t) +
                                          " s), coupling pass " + std::to_string(pass) + ": " + e.what(),
                                      e.iterations(), e.error());
        }
        out.newton_iterations += solved.second.iterations;

        std::vector<FaceValues> vhat = vstar;
        if (two) {
            for (std::size_t i = 0; i < ni; ++i) {
                for (int g = 0; g < 2; ++g) vhat[i][g] = (2.0 * vstar[i][g] + memory.vhat[i][g]) / 3.0;
            }
        }
        std::vector<double> h(ni);
        for (std::size_t i = 0; i < ni; ++i) {
            h[i] = out.h_tilde[i] + dt / grid[i].length * integrate_face(vhat[i], grid[i].length);
        }

        const InterfacePartition next = update_partition(part, h);
        if (next.last_flips == 0) {
            for (std::size_t i = 0; i < ni; ++i) {
                if (part.dry[i]) h[i] = 0.0;
            }
            out.psi = std::move(solved.first);
            out.h = std::move(h);
            out.vstar = std::move(vstar);
            out.vhat = std::move(vhat);
            out.partition = part;
            out.passes = pass;
            out.report = solved.second;
            out.bc = std::move(bc);
            break;
        }
        part = next;
    }
    if (out.passes == 0) throw std::logic_error("coupling iteration exceeded N_I + 2 passes");

    out.F_I = detail::interface_flux(grid, out.vstar);
    if (two) {
        out.Phi_I = corrected_interface_flux(out.F_I, memory);
        out.FWB_tilde = 2.0 / 3.0 * out.F_WB + memory.FWB_tilde / 3.0;
    } else {
        out.Phi_I = out.F_I;
        out.FWB_tilde = out.F_WB;
    }
    out.memory = {out.vhat, out.Phi_I, out.FWB_tilde, true};

    for (std::size_t i = 0; i < ni; ++i) {
        const double mean = space.face_mean(out.psi, grid[i].face);
        if (out.partition.is_wet(i)) {
            out.max_wet_deviation = std::max(out.max_wet_deviation, std::abs(mean - out.h_tilde[i]));
        }
        out.max_admissible_gap = std::max(out.max_admissible_gap, admissible_distance(mean, out.h[i]));
    }
    return out;
}

inline StepResult single_step_advance(const CoupledProblem& prob, int n, const StateHistory& history,
                                      const std::vector<double>& h_prev, SparseDirectSolver& solver) {
    return coupled_step(prob, CouplingMode::single_step, n, history, h_prev, CouplingMemory{}, solver);
}

inline StepResult two_step_advance(const CoupledProblem& prob, int n, const StateHistory& history,
                                   const std::vector<double>& h_prev, const CouplingMemory& memory,
                                   SparseDirectSolver& solver) {
    return coupled_step(prob, CouplingMode::two_step, n, history, h_prev, memory, solver);
}

}  // namespace cflow
