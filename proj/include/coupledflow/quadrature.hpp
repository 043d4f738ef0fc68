#pragma once

#include <array>
#include <cmath>

namespace cflow::quadrature {

/// Three-point rule on triangles, exact for quadratics. Points are given in
/// barycentric coordinates; weights sum to one (multiply by the area).
struct Triangle3 {
    static constexpr int size = 3;
    static constexpr std::array<std::array<double, 3>, 3> points{{
        {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
        {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
        {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
    }};
    static constexpr std::array<double, 3> weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
};

/// Two-point Gauss rule on [0, 1], exact for cubics. Weights sum to one
/// (multiply by the edge length).
struct Gauss2 {
    static constexpr int size = 2;
    static inline const std::array<double, 2> points{0.5 - 0.5 / std::sqrt(3.0),
                                                     0.5 + 0.5 / std::sqrt(3.0)};
    static constexpr std::array<double, 2> weights{0.5, 0.5};
};

}  // namespace cflow::quadrature
