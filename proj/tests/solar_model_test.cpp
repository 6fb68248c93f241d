#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "reference_fixture.hpp"
#include "solardc/solar_model.hpp"

using namespace solardc;
using solardc::testing::mosul_profile;

namespace {

IrradianceProfile constant(double c, double from, double to) { return IrradianceProfile({{from, c}, {to, c}}); }

IrradianceProfile triangle() { return IrradianceProfile({{7, 0}, {12, 443}, {17, 0}}); }

} // namespace

TEST(IrradianceProfile, Invariants) {
    EXPECT_THROW(IrradianceProfile({{8, 100}}), DomainError);
    EXPECT_THROW(IrradianceProfile({{8, 100}, {8, 200}}), DomainError);
    EXPECT_THROW(IrradianceProfile({{9, 100}, {8, 200}}), DomainError);
    EXPECT_THROW(IrradianceProfile({{8, -1}, {9, 200}}), DomainError);
    EXPECT_THROW(IrradianceProfile({{8, 1}, {25, 200}}), DomainError);
}

TEST(DailyInsolation, Examples) {
    EXPECT_DOUBLE_EQ(daily_insolation(constant(100, 8, 12)), 400.0);
    EXPECT_DOUBLE_EQ(daily_insolation(triangle()), 2215.0);
    EXPECT_NEAR(daily_insolation(mosul_profile()), 2464.0, 0.01 * 2464.0);
    EXPECT_THROW(daily_insolation(IrradianceProfile{}), DomainError);
}

TEST(DailyInsolation, AnalyticShapes) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> level(0, 1200), start(0, 11), span(0.5, 12);
    for (int i = 0; i < 500; ++i) {
        const double c = level(rng), a = start(rng), b = a + span(rng);
        EXPECT_NEAR(daily_insolation(constant(c, a, b)), c * (b - a), 1e-9 * std::max(1.0, c * (b - a)));

        const double peak = level(rng), mid = a + (b - a) * 0.37;
        const IrradianceProfile tri({{a, 0}, {mid, peak}, {b, 0}});
        EXPECT_NEAR(daily_insolation(tri), 0.5 * (b - a) * peak, 1e-9 * std::max(1.0, peak * (b - a)));
    }
}

TEST(DailyInsolation, Homogeneous) {
    const auto base = daily_insolation(mosul_profile());
    for (double alpha : {0.0, 0.5, 2.0, 3.7})
        EXPECT_NEAR(daily_insolation(mosul_profile().scaled(alpha)), alpha * base, 1e-9 * base);
}

TEST(InsolationBetween, HourlyPiecesSumToDay) {
    const auto p = mosul_profile();
    double sum = 0.0;
    for (int h = 0; h < 24; ++h)
        sum += insolation_between(p, h, h + 1);
    EXPECT_DOUBLE_EQ(sum, daily_insolation(p));
    EXPECT_DOUBLE_EQ(insolation_between(p, 0, 7), 0.0);
    EXPECT_DOUBLE_EQ(insolation_between(p, 11.5, 12.0), 0.5 * (416.5 + 443.0) * 0.5);
}

TEST(PeakIrradiance, Examples) {
    const auto peak = peak_irradiance(mosul_profile());
    EXPECT_DOUBLE_EQ(peak.hour, 12.0);
    EXPECT_DOUBLE_EQ(peak.irradiance, 443.0);

    EXPECT_DOUBLE_EQ(peak_irradiance(constant(50, 6, 9)).hour, 6.0);

    const IrradianceProfile twin({{8, 100}, {14, 100}, {15, 50}});
    EXPECT_DOUBLE_EQ(peak_irradiance(twin).hour, 8.0);
    EXPECT_DOUBLE_EQ(peak_irradiance(twin).irradiance, 100.0);
}

TEST(SizeArray, ReferencePlant) {
    const auto sz = size_array(2940000.0, 2464.0, {1.98, 0.99, 72, 1.0}, 100.0);
    EXPECT_NEAR(sz.required_area, 1193.18, 1e-3 * 1193.18);
    EXPECT_DOUBLE_EQ(sz.rounded_area, 1200.0);
    EXPECT_EQ(sz.panel_count, 613);
    EXPECT_NEAR(sz.daily_production, 2960748.8064, 1e-6);
}

TEST(SizeArray, ExactFeetConversionNeedsOneFewerPanel) {
    const auto sz = size_array(2940000.0, 2464.0, {1.9812, 0.9906, 72, 1.0}, 100.0);
    EXPECT_DOUBLE_EQ(sz.rounded_area, 1200.0);
    EXPECT_EQ(sz.panel_count, 612);
}

TEST(SizeArray, SmallCases) {
    for (double x : {1.0, 7.5, 2464.0, 1e6})
        EXPECT_EQ(size_array(x, x, {1.0, 1.0, 1, 1.0}, 1.0).panel_count, 1);

    const auto two = size_array(4830.0, 2464.0, {1.98, 0.99, 72, 1.0}, 1.0);
    EXPECT_DOUBLE_EQ(two.rounded_area, 2.0);
    EXPECT_EQ(two.panel_count, 2);
    EXPECT_EQ(oracle::linear_ceil(2.0, 1.98 * 0.99), 2);
}

TEST(SizeArray, Errors) {
    EXPECT_THROW(size_array(1000.0, 0.0, {}, 1.0), InfeasibleError);
    EXPECT_THROW(size_array(0.0, 2464.0, {}, 1.0), DomainError);
    EXPECT_THROW(size_array(1000.0, 2464.0, {0.0, 1.0, 1, 1.0}, 1.0), DomainError);
}

TEST(SizeArray, MinimalAgainstLinearScan) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> target(100, 5e6), ins(200, 8000), dim(0.3, 2.5), eff(0.1, 1.0);
    const double steps[] = {0.5, 1.0, 10.0, 100.0};
    for (int i = 0; i < 300; ++i) {
        const PanelSpec panel{dim(rng), dim(rng), 60, eff(rng)};
        const double step = steps[i % 4];
        const auto sz = size_array(target(rng), ins(rng), panel, step);
        EXPECT_EQ(sz.panel_count, oracle::linear_ceil(sz.rounded_area, panel.area()));
        EXPECT_GE(sz.panel_count * panel.area(), sz.rounded_area);
        EXPECT_LT((sz.panel_count - 1) * panel.area(), sz.rounded_area);
        EXPECT_EQ(sz.rounded_area, static_cast<double>(oracle::linear_ceil(sz.required_area, step)) * step);
        EXPECT_GE(sz.rounded_area, sz.required_area);
    }
}

TEST(SizeArray, ProductionLinearInPanelCount) {
    const PanelSpec panel{1.98, 0.99, 72, 0.2};
    const double one = array_production(1, panel, 2464.0);
    for (std::int64_t n : {0, 1, 10, 613})
        EXPECT_NEAR(array_production(n, panel, 2464.0), static_cast<double>(n) * one, 1e-9 * n * one);
}

TEST(Mps, Examples) {
    EXPECT_DOUBLE_EQ(mps(2940.0, 2940.0), 100.0);
    EXPECT_NEAR(mps(2.464, 2940.0), 0.0838095238095238, 1e-12);
    EXPECT_NEAR(mps(2967.0, 2940.0), 100.91836734693878, 1e-9);
    EXPECT_THROW(mps(1.0, 0.0), DomainError);
}

TEST(DeltaE, Examples) {
    EXPECT_DOUBLE_EQ(delta_e(2967.0, 2940.0), 27.0);
    EXPECT_DOUBLE_EQ(delta_e(512.5, 512.5), 0.0);
    EXPECT_DOUBLE_EQ(delta_e(2100.0, 2967.0), -867.0);
}

TEST(Metrics, Identities) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> e(1.0, 1e7);
    for (int i = 0; i < 500; ++i) {
        const double a = e(rng), b = e(rng);
        EXPECT_EQ(delta_e(a, b), -delta_e(b, a));
        EXPECT_NEAR(mps(a, b) * b / 100.0, a, 1e-9 * a);
    }
}
