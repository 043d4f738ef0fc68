#include <coupledflow/schedule.hpp>

#include <gtest/gtest.h>

using namespace cflow;

TEST(Schedule, ConstantAndLinear) {
    EXPECT_EQ(Schedule::parse("2.5")(100.0), 2.5);
    const Schedule s = Schedule::parse("0 0; 10 1; 120 1; 120 0");
    EXPECT_DOUBLE_EQ(s(5.0), 0.5);
    EXPECT_DOUBLE_EQ(s(60.0), 1.0);
    EXPECT_DOUBLE_EQ(s(200.0), 0.0);
    EXPECT_DOUBLE_EQ(s(-1.0), 0.0);
    EXPECT_EQ(s.max_abs(), 1.0);
}

TEST(Schedule, JumpIsLeftContinuous) {
    const Schedule rain = Schedule::parse("0 1e-5; 180 1e-5; 180 0");
    EXPECT_EQ(rain(180.0), 1e-5);
    EXPECT_EQ(rain(180.0 + 1e-9), 0.0);
}

TEST(Schedule, RoundTripAndErrors) {
    const Schedule s = Schedule::parse("0 1; 2 3");
    EXPECT_EQ(Schedule::parse(s.to_string())(1.0), 2.0);
    EXPECT_ANY_THROW(Schedule::parse("0 1; 2"));
    EXPECT_ANY_THROW(Schedule::parse("3 1; 2 0"));
    EXPECT_ANY_THROW(Schedule::parse(""));
}
