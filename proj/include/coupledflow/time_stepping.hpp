/**
 * @file time_stepping.hpp
 * @brief BDF1/BDF2 coefficients, history predictors, Crank-Nicolson start-up
 *        and the quasi-Newton loop for one implicit Richards step.
 */
#pragma once

#include "richards_dg.hpp"
#include "sparse_solver.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace cflow {

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, int iterations, double error)
        : std::runtime_error(what), iterations_(iterations), error_(error) {}
    int iterations() const { return iterations_; }
    double error() const { return error_; }

private:
    int iterations_;
    double error_;
};

struct BdfScheme {
    int order = 1;
    std::array<double, 3> alpha{1.0, -1.0, 0.0};
};

inline BdfScheme bdf_coefficients(int q) {
    if (q == 1) return {1, {1.0, -1.0, 0.0}};
    if (q == 2) return {2, {1.5, -2.0, 0.5}};
    throw std::invalid_argument("unsupported BDF order " + std::to_string(q));
}

/// Converged head field at one time level.
struct HydraulicState {
    Vector psi;
    int step = 0;
    double time = 0.0;

    void validate() const {
        if (!psi.allFinite()) {
            throw std::runtime_error("non-finite hydraulic head at step " + std::to_string(step));
        }
    }
};

/// Most recent states first: at(1) is level n-1, at(2) is n-2, ...
class StateHistory {
public:
    explicit StateHistory(std::size_t depth = 3) : depth_(depth) {}

    void push(HydraulicState s) {
        s.validate();
        states_.push_front(std::move(s));
        while (states_.size() > depth_) states_.pop_back();
    }
    std::size_t size() const { return states_.size(); }
    const HydraulicState& at(std::size_t r) const {
        if (r == 0 || r > states_.size()) {
            throw std::out_of_range("state history holds " + std::to_string(states_.size()) +
                                    " levels, level n-" + std::to_string(r) + " requested");
        }
        return states_[r - 1];
    }
    const HydraulicState& latest() const { return at(1); }

private:
    std::size_t depth_;
    std::deque<HydraulicState> states_;
};

/// Initial Newton guess for level n, extrapolating the history with the
/// given polynomial order (0: copy, 1: linear, 2: quadratic).
inline Vector predictor(const StateHistory& history, int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("predictor order must be 0, 1 or 2");
    if (history.size() < static_cast<std::size_t>(order) + 1) {
        throw std::out_of_range("predictor: insufficient history for order " + std::to_string(order));
    }
    if (order == 0) return history.at(1).psi;
    if (order == 1) return 2.0 * history.at(1).psi - history.at(2).psi;
    return 3.0 * history.at(1).psi - 3.0 * history.at(2).psi + history.at(3).psi;
}

/// The start-up schedule: psi^0 for n = 1, linear for n = 2, quadratic after.
inline Vector predictor_for_step(const StateHistory& history, int n) {
    return predictor(history, std::min(n - 1, 2));
}

struct NonlinearSolveReport {
    int iterations = 0;
    double final_error = 0.0;
    bool converged = false;
};

struct NewtonOptions {
    double tolerance = 1e-6;
    int max_iters = 50;
};

/// Time-discrete problem time_coeff Theta(psi) + op_weight S(psi) + offset = 0.
struct ImplicitProblem {
    const DgSpace* space = nullptr;
    const HaverkampSoil* soil = nullptr;
    const BoundaryData* bc = nullptr;
    double time_coeff = 0.0;
    double op_weight = 1.0;
    Vector offset;
};

inline Vector implicit_residual(const ImplicitProblem& p, const Vector& psi) {
    return p.time_coeff * water_accumulation(*p.space, *p.soil, psi) +
           p.op_weight * spatial_residual(*p.space, *p.soil, psi, *p.bc) + p.offset;
}

/// Quasi-Newton iteration with coefficients frozen at the current iterate.
/// E is ||dpsi|| / ||psi^{n,m}||, or the absolute norm for a near-zero iterate.
inline std::pair<Vector, NonlinearSolveReport> solve_quasi_newton(const ImplicitProblem& p,
                                                                  Vector guess,
                                                                  const NewtonOptions& opts,
                                                                  SparseDirectSolver& solver) {
    NonlinearSolveReport report;
    Vector psi = std::move(guess);
    if (!psi.allFinite()) throw NonConvergenceError("non-finite initial guess", 0, 0.0);
    for (int m = 1; m <= opts.max_iters; ++m) {
        const LinearizedSystem sys = assemble_linearized_system(*p.space, *p.soil, psi, *p.bc,
                                                                p.time_coeff, p.op_weight, p.offset);
        const Vector delta = solver.solve(sys.matrix, sys.rhs);
        const double norm = psi.norm();
        const double e = norm < 1e-14 ? delta.norm() : delta.norm() / norm;
        psi += delta;
        report.iterations = m;
        report.final_error = e;
        if (!std::isfinite(e) || !psi.allFinite()) {
            throw NonConvergenceError("quasi-Newton produced non-finite iterate at iteration " +
                                          std::to_string(m),
                                      m, e);
        }
        if (e <= opts.tolerance) {
            report.converged = true;
            return {std::move(psi), report};
        }
    }
    std::ostringstream msg;
    msg << "quasi-Newton did not converge in " << opts.max_iters
        << " iterations (E = " << report.final_error << ")";
    throw NonConvergenceError(msg.str(), report.iterations, report.final_error);
}

/// BDF step for level n. `source` is int f phi at t^n (empty for none).
inline std::pair<Vector, NonlinearSolveReport> nonlinear_step(
    const DgSpace& space, const HaverkampSoil& soil, const StateHistory& history,
    const BoundaryData& bc, const BdfScheme& scheme, double dt, const Vector& guess,
    const NewtonOptions& opts, SparseDirectSolver& solver, const Vector& source = Vector()) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    ImplicitProblem p{&space, &soil, &bc, scheme.alpha[0] / dt, 1.0,
                      Vector::Zero(space.num_dofs())};
    for (int r = 1; r <= scheme.order; ++r) {
        p.offset += (scheme.alpha[r] / dt) * water_accumulation(space, soil, history.at(r).psi);
    }
    if (source.size() > 0) p.offset -= source;
    return solve_quasi_newton(p, guess, opts, solver);
}

/// Trapezoidal first step: (Theta(psi^1) - Theta(psi^0)) / dt
///   + (S(psi^1; bc_new) + S(psi^0; bc_old)) / 2 = (F^0 + F^1) / 2.
inline std::pair<Vector, NonlinearSolveReport> crank_nicolson_first_step(
    const DgSpace& space, const HaverkampSoil& soil, const Vector& psi0, const BoundaryData& bc_new,
    const BoundaryData& bc_old, double dt, const Vector& guess, const NewtonOptions& opts,
    SparseDirectSolver& solver, const Vector& source0 = Vector(), const Vector& source1 = Vector()) {
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
    ImplicitProblem p{&space, &soil, &bc_new, 1.0 / dt, 0.5, Vector()};
    p.offset = -water_accumulation(space, soil, psi0) / dt +
               0.5 * spatial_residual(space, soil, psi0, bc_old);
    if (source0.size() > 0) p.offset -= 0.5 * source0;
    if (source1.size() > 0) p.offset -= 0.5 * source1;
    return solve_quasi_newton(p, guess, opts, solver);
}

}  // namespace cflow
