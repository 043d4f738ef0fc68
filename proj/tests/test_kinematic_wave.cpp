#include <coupledflow/kinematic_wave.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace cflow;

namespace {

InterfaceGrid uniform_grid(std::size_t n, double l, double slope) {
    std::vector<InterfaceCell> cells(n);
    for (std::size_t i = 0; i < n; ++i) {
        cells[i].x_left = i * l;
        cells[i].x_right = (i + 1) * l;
        cells[i].length = l;
        cells[i].slope = slope;
    }
    return InterfaceGrid(cells);
}

SubcycleSettings settings(double dt_sub, int substeps = 1, double t0 = 0.0) {
    SubcycleSettings s;
    s.strickler = 60.0;
    s.substeps = substeps;
    s.dt_sub = dt_sub;
    s.t_start = t0;
    return s;
}

}  // namespace

TEST(Manning, ReferenceValues) {
    EXPECT_EQ(manning_flux(0.0, 0.001, 60.0), 0.0);
    EXPECT_NEAR(manning_flux(0.01, 0.001, 60.0), 60.0 * std::pow(0.01, 5.0 / 3.0) * std::sqrt(0.001), 1e-18);
    EXPECT_NEAR(manning_flux(0.01, 0.001, 60.0), 8.807e-4, 5e-7);
    EXPECT_THROW(manning_flux(0.01, 0.0, 60.0), std::invalid_argument);
}

TEST(Manning, MidpointConvexity) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 0.1);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        EXPECT_LE(manning_flux(0.5 * (a + b), 0.002, 60.0),
                  0.5 * (manning_flux(a, 0.002, 60.0) + manning_flux(b, 0.002, 60.0)) * (1 + 1e-14));
    }
}

TEST(Cfl, ClosedFormBound) {
    const InterfaceGrid g = uniform_grid(5, 0.1, 0.001);
    const double expected = 3.0 / (5.0 * 60.0 * std::pow(0.05, 2.0 / 3.0)) * 0.1 / std::sqrt(0.001);
    EXPECT_NEAR(cfl_max_substep(g, 0.05, 60.0), expected, 1e-14);
    EXPECT_NEAR(cfl_max_substep(g, 0.05, 60.0), 0.2330, 5e-5);
    EXPECT_GT(cfl_max_substep(g, 1e-30, 60.0), 1e15);
}

TEST(Godunov, UniformStateIsSteady) {
    const InterfaceGrid g = uniform_grid(8, 0.1, 0.001);
    SurfaceState s;
    s.h.assign(8, 0.004);
    const auto out = godunov_subcycle(s, g, settings(0.5, 10), Schedule(0.0), Schedule(0.004), {});
    for (double h : out.state.h) EXPECT_NEAR(h, 0.004, 1e-17);
    EXPECT_EQ(out.state.substep, 10);
}

TEST(Godunov, SingleCellRainRecursion) {
    const InterfaceGrid g = uniform_grid(1, 0.5, 0.002);
    SurfaceState s;
    s.h = {0.0};
    const double r = 1e-5, dt = 0.1;
    const auto out = godunov_subcycle(s, g, settings(dt, 20), Schedule(r), Schedule(0.0), {});
    double h = 0.0;
    for (int k = 0; k < 20; ++k) h += dt * r - dt / 0.5 * manning_flux(h, 0.002, 60.0);
    EXPECT_NEAR(out.state.h[0], h, 1e-18);
    EXPECT_NEAR(out.F_r, r * 0.5, 1e-20);
}

TEST(Godunov, MassIdentityPerSubstep) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const InterfaceGrid g = uniform_grid(12, 0.2, 0.003);
    for (int c = 0; c < 100; ++c) {
        SurfaceState s;
        for (int i = 0; i < 12; ++i) s.h.push_back(0.003 * u(rng));
        std::vector<double> vint(12);
        for (auto& v : vint) v = 1e-6 * (u(rng) - 0.3);
        const double r = 1e-5 * u(rng);
        const double ha = 0.002 * u(rng);
        auto ss = settings(0.05, 1);
        const auto out = godunov_subcycle(s, g, ss, Schedule(r), Schedule(ha), vint);
        double lhs = 0.0, vsum = 0.0, vabs = 0.0;
        for (int i = 0; i < 12; ++i) {
            lhs += 0.2 * (out.state.h[i] - s.h[i]);
            vsum += vint[i];
            vabs += std::abs(vint[i]);
        }
        const double rhs = 0.05 * (out.F_ABr() + vsum);
        // Relative to the largest term entering the balance.
        const double scale = 0.05 * (out.F_A + std::abs(out.F_B) + out.F_r + vabs);
        EXPECT_NEAR(lhs, rhs, 1e-12 * scale);
    }
}

TEST(Godunov, StepDownFrontSelfConverges) {
    // Front from a step-down profile on grids of 50, 100, 200 cells against a 1600-cell reference.
    const double L = 2.0, T = 20.0;
    const auto solve = [&](int n) {
        const InterfaceGrid g = uniform_grid(n, L / n, 0.001);
        SurfaceState s;
        for (int i = 0; i < n; ++i) s.h.push_back((i + 0.5) * L / n < 0.5 ? 0.004 : 0.0005);
        const double dt = 0.5 * cfl_max_substep(g, 0.004, 60.0);
        const int steps = static_cast<int>(std::ceil(T / dt));
        auto ss = settings(T / steps, steps);
        return godunov_subcycle(s, g, ss, Schedule(0.0), Schedule(0.004), {}).state.h;
    };
    const auto ref = solve(1600);
    const auto err = [&](int n) {
        const auto h = solve(n);
        double e = 0.0;
        const int r = 1600 / n;
        for (int i = 0; i < n; ++i) {
            double mean = 0.0;
            for (int k = 0; k < r; ++k) mean += ref[i * r + k] / r;
            e += std::abs(h[i] - mean) * L / n;
        }
        return e;
    };
    const double e1 = err(50), e2 = err(100), e3 = err(200);
    EXPECT_LT(e2, e1);
    EXPECT_LT(e3, e2);
}

TEST(Godunov, MaxPrincipleAndTotalVariation) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int c = 0; c < 200; ++c) {
        const InterfaceGrid g = uniform_grid(20, 0.05 + 0.1 * u(rng), 1e-4 + 5e-3 * u(rng));
        SurfaceState s;
        for (int i = 0; i < 20; ++i) s.h.push_back(0.01 * u(rng));
        const double ha = 0.01 * u(rng);
        const double lo = std::min(ha, *std::min_element(s.h.begin(), s.h.end()));
        const double hi = std::max(ha, *std::max_element(s.h.begin(), s.h.end()));
        auto ss = settings(cfl_max_substep(g, hi, 60.0) * u(rng));
        double tv = total_variation(s.h, ha);
        for (int k = 0; k < 20; ++k) {
            s = godunov_subcycle(s, g, ss, Schedule(0.0), Schedule(ha), {}).state;
            for (double h : s.h) {
                EXPECT_GE(h, lo - 1e-16);
                EXPECT_LE(h, hi + 1e-16);
            }
            const double next = total_variation(s.h, ha);
            EXPECT_LE(next, tv * (1 + 1e-12) + 1e-18);
            tv = next;
        }
    }
}

TEST(Godunov, SinkMayDriveDepthNegative) {
    const InterfaceGrid g = uniform_grid(2, 1.0, 0.001);
    SurfaceState s;
    s.h = {0.001, 0.001};
    const auto out = godunov_subcycle(s, g, settings(1.0), Schedule(0.0), Schedule(0.0), {-0.01, 0.0});
    EXPECT_LT(out.state.h[0], 0.0);
}

TEST(Godunov, RejectsCflViolation) {
    const InterfaceGrid g = uniform_grid(4, 0.1, 0.001);
    SurfaceState s;
    s.h.assign(4, 0.0);
    auto ss = settings(1.0);
    ss.cfl_h_max = 0.05;
    EXPECT_THROW(godunov_subcycle(s, g, ss, Schedule(0.0), Schedule(0.0), {}), CflError);
}
