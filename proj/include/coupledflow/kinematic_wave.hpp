/**
 * @file kinematic_wave.hpp
 * @brief Explicit upwind finite volumes for the kinematic-wave equation
 *        dh/dt + d phi(h, S)/dx = -v_r . n + v* on the interface grid.
 *
 * phi(h, S) = K h^{5/3} S^{1/2} is increasing in h, so for nonnegative states
 * the Godunov flux is the upwind (left) value and flow runs from A to B.
 */
#pragma once

#include "mesh.hpp"
#include "schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cflow {

class CflError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double manning_flux(double h, double slope, double strickler) {
    if (h < 0.0) throw std::invalid_argument("manning_flux: negative depth");
    if (!(slope > 0.0)) throw std::invalid_argument("manning_flux: slope must be positive");
    if (h == 0.0) return 0.0;
    return strickler * std::pow(h, 5.0 / 3.0) * std::sqrt(slope);
}

/// Largest admissible sub-step: 3 / (5 K h_max^{2/3}) * min_i l_i S_i^{-1/2}.
inline double cfl_max_substep(const InterfaceGrid& grid, double h_max, double strickler) {
    if (!(h_max > 0.0)) throw std::invalid_argument("cfl_max_substep: h_max must be positive");
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : grid) m = std::min(m, c.length / std::sqrt(c.slope));
    return 3.0 / (5.0 * strickler * std::pow(h_max, 2.0 / 3.0)) * m;
}

struct SurfaceState {
    std::vector<double> h;
    double h_A = 0.0;
    int substep = 0;
};

struct SubcycleSettings {
    double strickler = 60.0;
    int substeps = 1;        ///< n'
    double dt_sub = 1.0;     ///< dt' = dt / n'
    double t_start = 0.0;    ///< t^{n-1}
    double cfl_h_max = 0.0;  ///< a priori depth bound for the CFL check (0 skips it)
};

/// Macro-step boundary fluxes, time averages of the applied sub-step fluxes
/// (prefactor dt' / dt). F_A and F_r are inflows, F_B is an outflow (<= 0).
struct SubcycleResult {
    SurfaceState state;
    double F_A = 0.0;
    double F_B = 0.0;
    double F_r = 0.0;
    double F_ABr() const { return F_A + F_B + F_r; }
};

/// n' upwind sub-steps. `vstar_integral[i]` is int_{e_i} v*, held fixed over
/// the macro step. Rain is the intensity r(t) >= 0, i.e. v_r . n = -r. The
/// ghost cell upstream of A uses h_A(t) with the first cell's slope; the
/// outflow at B uses the last cell's slope. Sub-step k uses data at
/// t_start + k dt'. Depths may leave the call negative when v* is a sink.
inline SubcycleResult godunov_subcycle(const SurfaceState& initial, const InterfaceGrid& grid,
                                       const SubcycleSettings& s, const Schedule& rain,
                                       const Schedule& h_A, const std::vector<double>& vstar_integral) {
    const std::size_t n = grid.size();
    if (initial.h.size() != n) throw std::invalid_argument("godunov_subcycle: state size mismatch");
    if (!vstar_integral.empty() && vstar_integral.size() != n) {
        throw std::invalid_argument("godunov_subcycle: v* size mismatch");
    }
    if (s.substeps < 1 || !(s.dt_sub > 0.0)) throw std::invalid_argument("godunov_subcycle: bad sub-step");
    if (s.cfl_h_max > 0.0) {
        const double bound = cfl_max_substep(grid, s.cfl_h_max, s.strickler);
        if (s.dt_sub > bound) {
            throw CflError("sub-step " + std::to_string(s.dt_sub) + " s exceeds CFL bound " +
                           std::to_string(bound) + " s");
        }
    }
    const auto phi = [&](double h, double slope) {
        return manning_flux(std::max(h, 0.0), slope, s.strickler);
    };

    SubcycleResult out;
    out.state = initial;
    std::vector<double>& h = out.state.h;
    std::vector<double> flux(n + 1);
    double sum_a = 0.0, sum_b = 0.0, sum_r = 0.0;
    for (int k = 0; k < s.substeps; ++k) {
        const double t = s.t_start + k * s.dt_sub;
        const double ha = h_A(t);
        if (ha < 0.0) throw std::invalid_argument("negative upstream depth h_A");
        const double r = rain(t);
        flux[0] = phi(ha, grid[0].slope);
        for (std::size_t i = 0; i < n; ++i) flux[i + 1] = phi(h[i], grid[i].slope);
        double rain_volume = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double l = grid[i].length;
            double src = flux[i] - flux[i + 1] + l * r;
            if (!vstar_integral.empty()) src += vstar_integral[i];
            h[i] += s.dt_sub / l * src;
            rain_volume += l * r;
        }
        sum_a += flux[0];
        sum_b -= flux[n];
        sum_r += rain_volume;
        out.state.h_A = ha;
        ++out.state.substep;
    }
    const double w = 1.0 / s.substeps;  // dt' / dt
    out.F_A = w * sum_a;
    out.F_B = w * sum_b;
    out.F_r = w * sum_r;
    return out;
}

/// Total variation including the upstream ghost value.
inline double total_variation(const std::vector<double>& h, double h_A) {
    double tv = h.empty() ? 0.0 : std::abs(h.front() - h_A);
    for (std::size_t i = 1; i < h.size(); ++i) tv += std::abs(h[i] - h[i - 1]);
    return tv;
}

}  // namespace cflow
