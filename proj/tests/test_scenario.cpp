#include <coupledflow/scenario.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace cflow;

TEST(Presets, Validate) {
    for (const char* name : {"tc1", "tc2", "tc3"}) {
        const ScenarioConfig c = preset(name);
        EXPECT_NO_THROW(c.validate()) << name;
        EXPECT_EQ(c.name, name);
    }
    EXPECT_THROW(preset("tc4"), ConfigError);
}

TEST(Presets, Tc2RainIsTenthOfConductivity) {
    const ScenarioConfig c = preset_tc2();
    EXPECT_DOUBLE_EQ(c.rain(10.0), 0.1 * c.soil.K_s);
    EXPECT_DOUBLE_EQ(c.rain(10.0) * 1000.0 * 3600.0, 36.0);  // mm/h
    EXPECT_EQ(c.rain(181.0), 0.0);
    EXPECT_EQ(c.num_steps(), 360);
}

TEST(Presets, Tc3InjectionProfile) {
    const ScenarioConfig c = preset_tc3();
    const WallVelocity v = c.wall_velocity();
    EXPECT_DOUBLE_EQ(v({0.5, 0.0}, 60.0), -0.03 * c.soil.K_s * 0.25);
    EXPECT_DOUBLE_EQ(v({0.5, 0.0}, 5.0), -0.03 * c.soil.K_s * 0.25 * 0.5);
    EXPECT_EQ(v({1.5, 0.0}, 60.0), 0.0);
    EXPECT_EQ(v({0.5, 0.1}, 60.0), 0.0);
    EXPECT_EQ(v({0.5, 0.0}, 200.0), 0.0);
}

TEST(Config, OverridesPreset) {
    std::istringstream in(R"(
# comment
[run]
preset = tc2
T = 20
mode = single
[mesh]
h = 0.2   # coarse
[soil]
K_s = 2e-4
[boundary]
rain = 0 1e-6; 10 1e-6; 10 0
)");
    const ScenarioConfig c = load_config(in);
    EXPECT_EQ(c.name, "tc2");
    EXPECT_EQ(c.T, 20.0);
    EXPECT_EQ(c.mode, CouplingMode::single_step);
    EXPECT_EQ(c.mesh_h, 0.2);
    EXPECT_EQ(c.soil.K_s, 2e-4);
    EXPECT_EQ(c.rain(5.0), 1e-6);
    EXPECT_EQ(c.water_table, 0.85);
}

TEST(Config, Errors) {
    const auto load = [](const std::string& text) {
        std::istringstream in(text);
        return load_config(in, "tc2");
    };
    EXPECT_THROW(load("[run]\nbogus = 1\n"), ConfigError);
    EXPECT_THROW(load("T = 1\n"), ConfigError);
    EXPECT_THROW(load("[run]\nT = abc\n"), ConfigError);
    EXPECT_THROW(load("[run]\nT = 1\nT = 2\n"), ConfigError);
    EXPECT_THROW(load("[run]\ndt = 0.7\n"), ConfigError);
    EXPECT_THROW(load("[run]\nmode = three\n"), ConfigError);
    EXPECT_THROW(load("[run\n"), ConfigError);
    EXPECT_THROW(load("[boundary]\nrain = 0 -1\n"), ConfigError);
    EXPECT_THROW(load_config_file("/nonexistent/file.cfg"), ConfigError);
}

TEST(Config, TextRoundTrip) {
    ScenarioConfig a = preset_tc3();
    a.injection_scale = 10.0;
    std::istringstream in(to_config_text(a));
    const ScenarioConfig b = load_config(in);
    EXPECT_EQ(to_config_text(a), to_config_text(b));
    EXPECT_EQ(b.geometry.bottom_split.value(), 1.0);
    EXPECT_EQ(b.injection_ramp(120.0), 1.0);
}
