#include "support.hpp"

#include <coupledflow/scenario.hpp>
#include <coupledflow/time_stepping.hpp>

#include <gtest/gtest.h>

#include <functional>

using namespace cflow;

namespace {
const HaverkampSoil sand = HaverkampSoil::sand();
}

TEST(Bdf, Coefficients) {
    const BdfScheme one = bdf_coefficients(1);
    EXPECT_EQ(one.alpha[0], 1.0);
    EXPECT_EQ(one.alpha[1], -1.0);
    const BdfScheme two = bdf_coefficients(2);
    EXPECT_EQ(two.alpha[0], 1.5);
    EXPECT_EQ(two.alpha[1], -2.0);
    EXPECT_EQ(two.alpha[2], 0.5);
    for (int q : {1, 2}) {
        const auto a = bdf_coefficients(q).alpha;
        EXPECT_EQ(a[0] + a[1] + a[2], 0.0);
        // First-order consistency: sum_r alpha_r (-r) = 1.
        EXPECT_EQ(-a[1] - 2.0 * a[2], 1.0);
    }
    EXPECT_THROW(bdf_coefficients(3), std::invalid_argument);
}

TEST(Predictor, ExactOnPolynomialHistories) {
    const auto push3 = [](StateHistory& h, const std::function<double(double)>& f) {
        for (int n = 0; n < 3; ++n) h.push({Vector::Constant(2, f(n)), n, double(n)});
    };
    StateHistory c(3), lin(3), quad(3);
    push3(c, [](double) { return 4.0; });
    push3(lin, [](double t) { return 1.0 + 2.0 * t; });
    push3(quad, [](double t) { return 1.0 - t + 0.5 * t * t; });
    EXPECT_DOUBLE_EQ(predictor(c, 2)[0], 4.0);
    EXPECT_DOUBLE_EQ(predictor(lin, 1)[0], 7.0);
    EXPECT_DOUBLE_EQ(predictor(lin, 2)[0], 7.0);
    EXPECT_DOUBLE_EQ(predictor(quad, 2)[0], 1.0 - 3.0 + 4.5);
    StateHistory short_history(3);
    short_history.push({Vector::Zero(1), 0, 0.0});
    EXPECT_THROW(predictor(short_history, 1), std::out_of_range);
    EXPECT_EQ(predictor_for_step(short_history, 1).size(), 1);
}

TEST(StateHistory, KeepsNewestFirst) {
    StateHistory h(2);
    for (int n = 0; n < 4; ++n) h.push({Vector::Constant(1, n), n, double(n)});
    EXPECT_EQ(h.size(), 2u);
    EXPECT_EQ(h.at(1).step, 3);
    EXPECT_EQ(h.at(2).step, 2);
    EXPECT_THROW(h.at(3), std::out_of_range);
    Vector bad(1);
    bad[0] = std::nan("");
    EXPECT_THROW(h.push({bad, 9, 9.0}), std::runtime_error);
}

class HydrostaticColumn : public ::testing::Test {
protected:
    TriMesh mesh = generate_structured_mesh({preset_tc2().geometry, 0.25, 0.3});
    DgSpace space{mesh};
    BoundaryData bc = BoundaryData::no_flux(mesh);
    Vector psi = space.interpolate([](Point p) { return 0.85 - p.z; });
    SparseDirectSolver solver;
};

TEST_F(HydrostaticColumn, NewtonConvergesInOneIteration) {
    StateHistory h(3);
    h.push({psi, 0, 0.0});
    const auto [next, report] = nonlinear_step(space, sand, h, bc, bdf_coefficients(1), 1.0, psi, {}, solver);
    EXPECT_TRUE(report.converged);
    EXPECT_EQ(report.iterations, 1);
    EXPECT_LT(report.final_error, 1e-12);
    EXPECT_LT((next - psi).cwiseAbs().maxCoeff(), 1e-10);
}

TEST_F(HydrostaticColumn, TrapezoidalStepKeepsSteadyState) {
    const auto [next, report] = crank_nicolson_first_step(space, sand, psi, bc, bc, 5.0, psi, {}, solver);
    EXPECT_TRUE(report.converged);
    EXPECT_LT((next - psi).cwiseAbs().maxCoeff(), 1e-10);
}

TEST_F(HydrostaticColumn, IncrementShrinksLinearlyWithStep) {
    // Drain through a wet top face held at a lower head.
    BoundaryData drain = bc;
    for (const auto& cell : extract_interface_grid(mesh)) drain.set_dirichlet(cell.face, {-0.5, -0.5});
    StateHistory h(3);
    h.push({psi, 0, 0.0});
    double change[2];
    int k = 0;
    for (double dt : {0.002, 0.001}) {
        NewtonOptions opts{1e-10, 50};
        const auto [next, report] = nonlinear_step(space, sand, h, drain, bdf_coefficients(1), dt, psi, opts, solver);
        change[k++] = (next - psi).norm();
    }
    EXPECT_NEAR(change[0] / change[1], 2.0, 0.05);
}

TEST_F(HydrostaticColumn, NonConvergenceReported) {
    BoundaryData drain = bc;
    for (const auto& cell : extract_interface_grid(mesh)) drain.set_dirichlet(cell.face, {-2.0, -2.0});
    StateHistory h(3);
    h.push({psi, 0, 0.0});
    NewtonOptions opts{1e-14, 1};
    EXPECT_THROW(nonlinear_step(space, sand, h, drain, bdf_coefficients(1), 100.0, psi, opts, solver),
                 NonConvergenceError);
}
