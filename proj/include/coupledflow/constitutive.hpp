/**
 * @file constitutive.hpp
 * @brief Haverkamp water-retention and conductivity laws.
 *
 *   theta(psi) = (theta_s - theta_r) / (1 + |alpha psi|^beta) + theta_r
 *   K(psi)     = K_s / (1 + |A psi|^gamma)
 *
 * Both laws are clamped to their saturated values for psi >= 0, where the
 * soil is fully saturated and theta, K are constant.
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace cflow {

struct HaverkampSoil {
    double theta_s = 0.5;
    double theta_r = 0.05;
    double alpha = 2.8;  ///< 1/m
    double beta = 4.0;
    double K_s = 1e-4;   ///< m/s
    double A = 3.0;      ///< 1/m
    double gamma = 4.0;

    /// Sand used in all reference scenarios, in SI units.
    static HaverkampSoil sand() { return {}; }

    void validate() const {
        const bool ok = 0.0 <= theta_r && theta_r < theta_s && theta_s <= 1.0 && K_s > 0.0 &&
                        alpha > 0.0 && A > 0.0 && beta > 1.0 && gamma > 1.0;
        if (!ok) throw std::invalid_argument("invalid Haverkamp soil parameters");
    }
};

inline double water_content(const HaverkampSoil& soil, double psi) {
    if (psi >= 0.0) return soil.theta_s;
    return (soil.theta_s - soil.theta_r) / (1.0 + std::pow(-soil.alpha * psi, soil.beta)) +
           soil.theta_r;
}

inline double conductivity(const HaverkampSoil& soil, double psi) {
    if (psi >= 0.0) return soil.K_s;
    return soil.K_s / (1.0 + std::pow(-soil.A * psi, soil.gamma));
}

/// d theta / d psi, zero in the saturated zone.
inline double moisture_capacity(const HaverkampSoil& soil, double psi) {
    if (psi >= 0.0) return 0.0;
    const double s = -soil.alpha * psi;  // > 0
    const double sb = std::pow(s, soil.beta);
    const double denom = 1.0 + sb;
    return (soil.theta_s - soil.theta_r) * soil.beta * soil.alpha * (sb / s) / (denom * denom);
}

/// Distance of a (psi, h) pair from the admissible set {h = max(psi, 0)}.
inline double admissible_distance(double psi, double h) {
    if (h < 0.0) throw std::invalid_argument("admissible_distance: negative depth");
    return std::abs(h - std::max(psi, 0.0));
}

}  // namespace cflow
