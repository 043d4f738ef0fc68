/**
 * @file mass_audit.hpp
 * @brief Water volumes, boundary fluxes and per-step mass defects.
 *
 * Volumes are per unit transverse width (m^2), fluxes in m^2/s. For step n
 *
 *   eps^n = V_grnd^n - V_grnd^{n-1} - (F_I + F_WB) dt                  (n = 1, single)
 *   eps^n = 3/2 dV_grnd^n - 1/2 dV_grnd^{n-1} - (F_I + F_WB) dt        (two-step, n >= 2)
 *   dV^n  = V^n - V^{n-1} - (F_WB + F_ABr) dt,   V = V_grnd + V_over
 *
 * with F_WB replaced by the corrected wall flux in two-step mode.
 */
#pragma once

#include "coupling.hpp"
#include "richards_dg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

namespace cflow {

inline double groundwater_volume(const DgSpace& space, const HaverkampSoil& soil, const Vector& psi) {
    return integrate_water_content(space, soil, psi);
}

inline double overland_volume(const std::vector<double>& h, const InterfaceGrid& grid) {
    if (h.size() != grid.size()) throw std::invalid_argument("overland_volume: size mismatch");
    double v = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] < 0.0) throw std::invalid_argument("overland_volume: negative depth");
        v += grid[i].length * h[i];
    }
    return v;
}

struct BoundaryFluxes {
    double F_I = 0.0;
    double F_WB = 0.0;
    double F_A = 0.0;
    double F_B = 0.0;
    double F_r = 0.0;
};

inline BoundaryFluxes boundary_fluxes(const StepResult& s) {
    return {s.F_I, s.F_WB, s.F_A, s.F_B, s.F_r};
}

/// Interface flux split by the sign of v*: exfiltration where v* > 0,
/// infiltration where v* < 0. Both parts carry the sign of F_I = -int v*.
struct FluxSplit {
    double exfiltration = 0.0;
    double infiltration = 0.0;
};

inline FluxSplit flux_split(const InterfaceGrid& grid, const std::vector<FaceValues>& vstar) {
    FluxSplit out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (int g = 0; g < 2; ++g) {
            const double part = -quadrature::Gauss2::weights[g] * grid[i].length * vstar[i][g];
            if (vstar[i][g] > 0.0) out.exfiltration += part;
            if (vstar[i][g] < 0.0) out.infiltration += part;
        }
    }
    return out;
}

struct MassRow {
    int step = 0;
    double time = 0.0;
    double V_grnd = 0.0;
    double V_over = 0.0;
    double F_I = 0.0;
    double Phi_I = 0.0;
    double F_WB = 0.0;
    double FWB_tilde = 0.0;
    double F_A = 0.0;
    double F_B = 0.0;
    double F_r = 0.0;
    double dV = 0.0;
    double cumdV = 0.0;
    double eps = 0.0;
    double F_ex = 0.0;
    double F_in = 0.0;
    double surface_residual = 0.0;     ///< relative residual of the surface balance
    double recurrence_residual = 0.0;  ///< dV^n - dV^{n-1}/3 - 2 eps^n/3 (two-step)

    double F_ABr() const { return F_A + F_B + F_r; }
    double volume() const { return V_grnd + V_over; }
};

/// Defect of one step given the previous rows (empty for the first step).
inline double step_defect(CouplingMode mode, const MassRow& row, const MassRow& prev) {
    const double dt = row.time - prev.time;
    const double wb = mode == CouplingMode::two_step ? row.FWB_tilde : row.F_WB;
    return row.volume() - prev.volume() - (wb + row.F_ABr()) * dt;
}

class MassLedger {
public:
    MassLedger(CouplingMode mode, double dt, double rho = 1000.0) : mode_(mode), dt_(dt), rho_(rho) {}

    void set_initial(double V_grnd, double V_over) {
        rows_.clear();
        MassRow r;
        r.V_grnd = V_grnd;
        r.V_over = V_over;
        rows_.push_back(r);
    }

    const MassRow& record(const StepResult& s, double V_grnd, double V_over, const InterfaceGrid& grid) {
        if (rows_.empty()) throw std::logic_error("mass ledger: initial volumes not set");
        const MassRow& prev = rows_.back();
        MassRow r;
        r.step = s.step;
        r.time = s.time;
        r.V_grnd = V_grnd;
        r.V_over = V_over;
        r.F_I = s.F_I;
        r.Phi_I = s.Phi_I;
        r.F_WB = s.F_WB;
        r.FWB_tilde = s.FWB_tilde;
        r.F_A = s.F_A;
        r.F_B = s.F_B;
        r.F_r = s.F_r;
        const FluxSplit split = flux_split(grid, s.vstar);
        r.F_ex = split.exfiltration;
        r.F_in = split.infiltration;

        const bool two = mode_ == CouplingMode::two_step && rows_.size() >= 2;
        const double dvg = V_grnd - prev.V_grnd;
        if (two) {
            const double dvg_prev = prev.V_grnd - rows_[rows_.size() - 2].V_grnd;
            r.eps = 1.5 * dvg - 0.5 * dvg_prev - (r.F_I + r.F_WB) * dt_;
        } else {
            r.eps = dvg - (r.F_I + r.F_WB) * dt_;
        }
        r.dV = step_defect(mode_, r, prev);
        r.cumdV = prev.cumdV + r.dV;
        if (two) r.recurrence_residual = r.dV - (prev.dV / 3.0 + 2.0 * r.eps / 3.0);

        const double flux = mode_ == CouplingMode::two_step ? r.Phi_I : r.F_I;
        const double lhs = r.V_over - prev.V_over;
        const double rhs = (-flux + r.F_ABr()) * dt_;
        const double scale = std::max({std::abs(r.V_over), std::abs(prev.V_over),
                                       dt_ * (std::abs(flux) + std::abs(r.F_A) + std::abs(r.F_B) +
                                              std::abs(r.F_r)),
                                       std::numeric_limits<double>::min()});
        r.surface_residual = std::abs(lhs - rhs) / scale;
        rows_.push_back(r);
        return rows_.back();
    }

    /// Rows including the initial one at index 0.
    const std::vector<MassRow>& rows() const { return rows_; }
    CouplingMode mode() const { return mode_; }
    double rho() const { return rho_; }
    double dt() const { return dt_; }

    /// rho times the cumulative volume defect.
    double mass_defect() const { return rho_ * rows_.back().cumdV; }

    /// |V^N - V^0 - sum dV - sum (F_WB + F_ABr) dt| relative to max V.
    double telescoping_residual() const {
        double sum = 0.0;
        double vmax = 0.0;
        for (std::size_t k = 1; k < rows_.size(); ++k) {
            const auto& r = rows_[k];
            const double wb = mode_ == CouplingMode::two_step ? r.FWB_tilde : r.F_WB;
            sum += r.dV + (wb + r.F_ABr()) * dt_;
        }
        for (const auto& r : rows_) vmax = std::max(vmax, std::abs(r.volume()));
        const double diff = rows_.back().volume() - rows_.front().volume() - sum;
        return std::abs(diff) / std::max(vmax, std::numeric_limits<double>::min());
    }

    double max_abs_eps() const {
        double m = 0.0;
        for (std::size_t k = 1; k < rows_.size(); ++k) m = std::max(m, std::abs(rows_[k].eps));
        return m;
    }

    double sum_abs_eps() const {
        double s = 0.0;
        for (std::size_t k = 1; k < rows_.size(); ++k) s += std::abs(rows_[k].eps);
        return s;
    }

    static void write_header(std::ostream& out) {
        out << "step,time,V_grnd,V_over,F_I,Phi_I,F_WB,F_A,F_B,F_r,dV,cumdV,eps_n,F_ex,F_in\n";
    }

    static void write_row(std::ostream& out, const MassRow& r) {
        out << r.step << ',' << r.time << ',' << r.V_grnd << ',' << r.V_over << ',' << r.F_I << ','
            << r.Phi_I << ',' << r.F_WB << ',' << r.F_A << ',' << r.F_B << ',' << r.F_r << ','
            << r.dV << ',' << r.cumdV << ',' << r.eps << ',' << r.F_ex << ',' << r.F_in << '\n';
    }

private:
    CouplingMode mode_;
    double dt_;
    double rho_;
    std::vector<MassRow> rows_;
};

}  // namespace cflow
