#include <coupledflow/coupling.hpp>
#include <coupledflow/simulation.hpp>

#include <gtest/gtest.h>

using namespace cflow;

namespace {

ScenarioConfig coarse_tc2(double T) {
    ScenarioConfig c = preset_tc2();
    c.mesh_h = 0.2;
    c.T = T;
    return c;
}

}  // namespace

TEST(Partition, AllNonnegativeSignalsKeepPartition) {
    const InterfacePartition p = InterfacePartition::all_wet(4);
    const InterfacePartition q = update_partition(p, {0.0, 1e-3, 2e-3, 0.0});
    EXPECT_EQ(q.last_flips, 0);
    EXPECT_EQ(q.n_dry(), 0u);
    EXPECT_EQ(q.iteration, 2);
}

TEST(Partition, NegativeCellFlipsAndDryStaysDry) {
    InterfacePartition p = InterfacePartition::all_wet(3);
    p = update_partition(p, {1e-3, -1e-9, 1e-3});
    EXPECT_EQ(p.last_flips, 1);
    EXPECT_TRUE(p.dry[1]);
    EXPECT_FALSE(p.dry[0]);
    p = update_partition(p, {1e-3, 5.0, 1e-3});
    EXPECT_TRUE(p.dry[1]);
    EXPECT_EQ(p.last_flips, 0);
    EXPECT_EQ(p.n_wet() + p.n_dry(), p.size());
    EXPECT_THROW(update_partition(p, {1.0}), std::invalid_argument);
}

TEST(CorrectedFlux, Recursion) {
    CouplingMemory m;
    EXPECT_EQ(corrected_interface_flux(3.0, m), 3.0);
    m.Phi = 3.0;
    m.initialized = true;
    EXPECT_DOUBLE_EQ(corrected_interface_flux(3.0, m), 3.0);
    m.Phi = 0.0;
    const double phi2 = corrected_interface_flux(3.0, m);
    EXPECT_DOUBLE_EQ(phi2, 2.0);
    EXPECT_DOUBLE_EQ(1.5 * phi2 - 0.5 * m.Phi, 3.0);
}

TEST(CorrectedFlux, ConvergesToConstantInput) {
    CouplingMemory m{{}, 10.0, 0.0, true};
    for (int k = 0; k < 60; ++k) m.Phi = corrected_interface_flux(-1.0, m);
    EXPECT_NEAR(m.Phi, -1.0, 1e-12);
}

TEST(CorrectedFlux, CounterBalanceOnRandomSequence) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CouplingMemory m;
    for (int k = 0; k < 100; ++k) {
        const double F = u(rng);
        const double phi = corrected_interface_flux(F, m);
        if (m.initialized) {
            EXPECT_NEAR(1.5 * phi - 0.5 * m.Phi, F, 1e-15);
        }
        m.Phi = phi;
        m.initialized = true;
    }
}

TEST(Coupling, DeepWaterTableStaysDry) {
    ScenarioConfig c = coarse_tc2(5.0);
    c.rain = Schedule(0.0);
    c.water_table = 0.3;
    c.h_max = 1e-3;
    for (CouplingMode mode : {CouplingMode::single_step, CouplingMode::two_step}) {
        c.mode = mode;
        const RunResult r = run_scenario(c);
        for (const auto& s : r.steps) {
            EXPECT_EQ(s.n_wet, 0u);
            EXPECT_EQ(s.max_h, 0.0);
            EXPECT_LE(s.passes, static_cast<int>(r.num_interface_cells) + 1);
        }
    }
}

TEST(Coupling, ClosedHydrostaticStateIsPreserved) {
    ScenarioConfig c = coarse_tc2(10.0);
    c.rain = Schedule(0.0);
    c.water_table = 0.5;
    c.h_max = 1e-3;
    std::vector<Vector> states;
    RunOptions opts;
    opts.on_step = [&](const StepResult& s) { states.push_back(s.psi); };
    const RunResult r = run_scenario(c, opts);
    const TriMesh mesh = build_mesh(c);
    const DgSpace space(mesh);
    const Vector psi0 = space.interpolate([](Point p) { return 0.5 - p.z; });
    for (const auto& s : states) EXPECT_LT((s - psi0).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(r.ledger.rows().back().V_over, 0.0);
}

TEST(Coupling, EarlyRainIsAbsorbed) {
    const ScenarioConfig c = coarse_tc2(10.0);
    for (CouplingMode mode : {CouplingMode::single_step, CouplingMode::two_step}) {
        ScenarioConfig m = c;
        m.mode = mode;
        std::vector<StepResult> steps;
        RunOptions opts;
        opts.on_step = [&](const StepResult& s) { steps.push_back(s); };
        run_scenario(m, opts);
        const StepResult& last = steps.back();
        EXPECT_EQ(last.partition.n_wet(), 0u);
        for (double h : last.h) EXPECT_EQ(h, 0.0);
        if (mode == CouplingMode::single_step) {
            // Neumann datum -h_tilde / dt equals the rain intensity.
            for (const auto& v : last.vstar) {
                EXPECT_NEAR(v[0], -1e-5, 1e-17);
                EXPECT_NEAR(v[1], -1e-5, 1e-17);
            }
        }
    }
}

TEST(Coupling, LateRainSaturatesInterface) {
    const RunResult r = run_scenario(coarse_tc2(180.0));
    const StepRecord& last = r.steps.back();
    EXPECT_EQ(last.n_dry, 0u);
    EXPECT_GT(last.min_h, 0.0);
}

TEST(Coupling, TwoStepNeedsMemory) {
    const ScenarioConfig c = coarse_tc2(2.0);
    const TriMesh mesh = build_mesh(c);
    const InterfaceGrid grid = extract_interface_grid(mesh);
    const DgSpace space(mesh);
    CoupledProblem prob;
    prob.space = &space;
    prob.soil = &c.soil;
    prob.grid = &grid;
    prob.rain = c.rain;
    prob.h_A = c.h_A;
    StateHistory h(3);
    h.push({space.interpolate([](Point p) { return 0.85 - p.z; }), 0, 0.0});
    h.push({h.latest().psi, 1, 1.0});
    SparseDirectSolver solver;
    EXPECT_THROW(two_step_advance(prob, 2, h, std::vector<double>(grid.size(), 0.0), CouplingMemory{}, solver),
                 std::logic_error);
    EXPECT_THROW(single_step_advance(prob, 2, h, std::vector<double>(grid.size(), -1.0), solver),
                 std::invalid_argument);
}
