#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "reference_fixture.hpp"
#include "solardc/sim_engine.hpp"

using namespace solardc;
using namespace solardc::testing;

namespace {

double night_deficit(const SimulationTrace& t) {
    double sum = 0.0;
    for (const auto& r : t.records)
        if (r.night)
            sum += r.deficit;
    return sum;
}

} // namespace

TEST(NightWindow, Geometry) {
    const NightWindow w{17, 7};
    EXPECT_DOUBLE_EQ(w.length(), 14.0);
    EXPECT_TRUE(w.contains(17));
    EXPECT_TRUE(w.contains(23.5));
    EXPECT_TRUE(w.contains(0));
    EXPECT_TRUE(w.contains(6.99));
    EXPECT_FALSE(w.contains(7));
    EXPECT_FALSE(w.contains(12));
    EXPECT_DOUBLE_EQ(w.remaining_from(17), 14.0);
    EXPECT_DOUBLE_EQ(w.remaining_from(3), 4.0);

    const NightWindow day_shift{1, 5};
    EXPECT_DOUBLE_EQ(day_shift.length(), 4.0);
    EXPECT_TRUE(day_shift.contains(1));
    EXPECT_FALSE(day_shift.contains(5));
    EXPECT_FALSE(day_shift.contains(23));
}

TEST(Run, ReferenceNightSpansFourteenHourlySteps) {
    const auto trace = run(reference_config());
    ASSERT_EQ(trace.records.size(), 24u);
    EXPECT_EQ(std::count_if(trace.records.begin(), trace.records.end(), [](auto& r) { return r.night; }), 14);
    EXPECT_DOUBLE_EQ(trace.records.front().t, 7.0);
}

TEST(Run, DaytimeProductionMatchesArrayYield) {
    const auto trace = run(reference_config());
    const auto totals = oracle::resum(trace);
    EXPECT_NEAR(totals.production, 613 * 1.98 * 0.99 * 2464.0, 1e-6);
}

TEST(Run, AlwaysOnNightDeficitFromFullBank) {
    auto cfg = reference_config(5);
    cfg.load_mode = LoadMode::Table;
    cfg.start_hour = 17.0;
    const auto trace = run(cfg);
    // 14 h at 210 kW against 5 x 480 kWh delivered at 0.8
    EXPECT_NEAR(night_deficit(trace), 2940000.0 - 5 * 480000.0 * 0.8, 1e-6);
    for (const auto& r : trace.records)
        if (r.night) {
            EXPECT_EQ(r.n_active, 100);
        }
}

TEST(Run, NoSourcesMeansEverythingIsDeficit) {
    auto cfg = reference_config(3);
    cfg.panel_count = 0;
    cfg.initial_soc = 0.0;
    const auto trace = run(cfg);
    for (const auto& r : trace.records) {
        EXPECT_EQ(r.deficit, r.load);
        EXPECT_EQ(r.discharge, 0.0);
        EXPECT_EQ(r.soc, 0.0);
    }
}

TEST(Run, ConsolidateWithFourBatteriesKeeps35ServersOn) {
    auto cfg = reference_config(4);
    cfg.load_mode = LoadMode::Table;
    cfg.policy = Policy::Consolidate;
    cfg.start_hour = 17.0;
    const auto trace = run(cfg);
    int night_steps = 0;
    for (const auto& r : trace.records)
        if (r.night) {
            EXPECT_EQ(r.n_active, 35) << r.t;
            EXPECT_EQ(r.load, 170000.0);
            ++night_steps;
        }
    EXPECT_EQ(night_steps, 14);
}

TEST(Run, ConsolidatePlansAgainstStoredEnergy) {
    // Half-full bank at dusk: the plan sees 1.2 MWh, which fits 10 servers but not 35.
    auto cfg = reference_config(5);
    cfg.load_mode = LoadMode::Table;
    cfg.policy = Policy::Consolidate;
    cfg.start_hour = 17.0;
    cfg.initial_soc = 1200000.0;
    const auto trace = run(cfg);
    EXPECT_EQ(trace.records.front().n_active, 10);
}

TEST(Run, ReplanEachStepKeepsCountsInRange) {
    auto cfg = reference_config(4);
    cfg.policy = Policy::Consolidate;
    cfg.replan_each_step = true;
    cfg.start_hour = 17.0;
    const auto trace = run(cfg);
    EXPECT_GE(trace.records.front().n_active, 1);
    for (const auto& r : trace.records) {
        EXPECT_GE(r.n_active, 1);
        EXPECT_LE(r.n_active, 100);
    }
}

TEST(Run, ForcedActiveCountGivesTableNightEnergy) {
    const std::map<int, double> expected = {
        {100, 2940000.0}, {80, 2800000.0}, {60, 2520000.0}, {35, 2380000.0}, {10, 2100000.0}};
    for (const auto& [n, energy] : expected) {
        auto cfg = reference_config();
        cfg.load_mode = LoadMode::Table;
        cfg.policy = Policy::Fixed;
        cfg.fixed_active = n;
        EXPECT_EQ(summarize(run(cfg)).night_consumption, energy) << n;
    }
}

TEST(Run, ConfigErrors) {
    auto cfg = reference_config();
    cfg.night = {7, 7};
    EXPECT_THROW(run(cfg), ConfigError);

    cfg = reference_config();
    cfg.step = 0.7;
    EXPECT_THROW(run(cfg), ConfigError);

    cfg = reference_config();
    cfg.days = 0;
    EXPECT_THROW(run(cfg), ConfigError);

    cfg = reference_config();
    cfg.load_mode = LoadMode::Table;
    cfg.lookup_table.clear();
    EXPECT_THROW(run(cfg), ConfigError);

    cfg = reference_config();
    cfg.policy = Policy::Fixed;
    cfg.fixed_active = 101;
    EXPECT_THROW(run(cfg), ConfigError);

    cfg = reference_config();
    cfg.profile = IrradianceProfile{};
    EXPECT_THROW(run(cfg), ConfigError);
}

TEST(Run, StepsCrossingMidnightSplitTheIntegral) {
    auto cfg = reference_config();
    cfg.profile = IrradianceProfile({{0, 100}, {24, 100}});
    cfg.panel_count = 1;
    cfg.panel = {1.0, 1.0, 1, 1.0};
    cfg.step = 3.0;
    cfg.start_hour = 22.0;
    const auto trace = run(cfg);
    for (const auto& r : trace.records)
        EXPECT_NEAR(r.solar_in, 300.0, 1e-9);
}

TEST(Run, Deterministic) {
    std::mt19937_64 rng(53);
    for (int i = 0; i < 50; ++i) {
        const auto cfg = random_config(rng);
        EXPECT_EQ(run(cfg), run(cfg));
    }
}

TEST(Run, RandomConfigsConserveEnergyAndBoundSoc) {
    std::mt19937_64 rng(59);
    for (int i = 0; i < 300; ++i) {
        const auto cfg = random_config(rng);
        const auto trace = run(cfg);
        ASSERT_EQ(trace.records.size(), static_cast<std::size_t>(cfg.step_count()));
        for (const auto& r : trace.records) {
            ASSERT_GE(r.soc, 0.0);
            ASSERT_LE(r.soc, cfg.bank.capacity());
            const double in = r.solar_in + r.discharge;
            const double out = (r.load - r.deficit) + r.charge + r.curtailed;
            ASSERT_NEAR(in, out, 1e-9 * std::max(1.0, in));
            ASSERT_GE(r.deficit, 0.0);
            ASSERT_LE(r.deficit, r.load);
        }
    }
}

TEST(Run, UnlimitedLosslessBankDeficitIsNetShortfall) {
    // With a lossless bank that never fills, deficit can only exceed the net
    // shortfall when the bank runs dry before later production arrives. With
    // no production it is exactly the net shortfall.
    std::mt19937_64 rng(61);
    for (int i = 0; i < 100; ++i) {
        auto cfg = random_config(rng);
        cfg.bank = {{1e12, 48, 1.0}, 1, 0.0};
        cfg.policy = Policy::AlwaysOn;
        cfg.initial_soc = std::uniform_real_distribution<double>(0, 5e6)(rng);
        const double tol = 1e-9 * 1e7 * cfg.days;

        auto t = oracle::resum(run(cfg));
        EXPECT_GE(t.deficit, std::max(0.0, t.consumption - t.production - *cfg.initial_soc) - tol);

        cfg.panel_count = 0;
        t = oracle::resum(run(cfg));
        EXPECT_NEAR(t.deficit, std::max(0.0, t.consumption - *cfg.initial_soc), tol);
    }
}

TEST(Run, UnlimitedLossyBankWithoutSurplus) {
    // No step has spare solar, so nothing is stored and re-delivered at a loss.
    auto cfg = reference_config();
    cfg.bank = {{1e12, 48, 0.8}, 1, 0.0};
    cfg.panel_count = 100;
    cfg.initial_soc = 1e6;
    const auto trace = run(cfg);
    const auto t = oracle::resum(trace);
    EXPECT_EQ(t.curtailed, 0.0);
    for (const auto& r : trace.records)
        EXPECT_EQ(r.charge, 0.0);
    EXPECT_NEAR(t.deficit, std::max(0.0, t.consumption - t.production - 1e6 * 0.8), 1e-6);
}

TEST(Summarize, MatchesIndependentResummation) {
    std::mt19937_64 rng(67);
    for (int i = 0; i < 100; ++i) {
        const auto trace = run(random_config(rng));
        const auto s = summarize(trace);
        const auto t = oracle::resum(trace);
        EXPECT_DOUBLE_EQ(s.total_production, t.production);
        EXPECT_DOUBLE_EQ(s.total_consumption, t.consumption);
        EXPECT_DOUBLE_EQ(s.night_consumption, t.night);
        EXPECT_DOUBLE_EQ(s.delta_e, t.production - t.consumption);
        EXPECT_DOUBLE_EQ(s.energy_saving, t.production - t.night);
        EXPECT_DOUBLE_EQ(s.min_soc, t.min_soc);
        EXPECT_DOUBLE_EQ(s.max_deficit, t.max_deficit);
    }
}

TEST(Summarize, EightyPercentNight) {
    // daylight yield of 2967 kWh over ten hours, 80 servers overnight at 200 kW
    SimulationTrace trace;
    trace.battery = reference_battery();
    for (int h = 7; h < 17; ++h)
        trace.records.push_back({.t = double(h), .night = false, .solar_in = 296700.0});
    for (int h = 17; h < 31; ++h)
        trace.records.push_back({.t = double(h), .night = true, .load = 200000.0, .n_active = 80});
    const auto s = summarize(trace);
    EXPECT_DOUBLE_EQ(s.energy_saving, 167000.0);
    EXPECT_EQ(s.batteries_implied, 5);
}

TEST(Summarize, ZeroTraceAndEmptyTrace) {
    SimulationTrace zero;
    zero.battery = reference_battery();
    zero.records.resize(24);
    EXPECT_EQ(summarize(zero), Summary{});

    EXPECT_THROW(summarize(SimulationTrace{}), DomainError);
}

TEST(Summarize, BatteriesImpliedFromWorstNight) {
    auto cfg = reference_config();
    cfg.days = 2;
    EXPECT_EQ(summarize(run(cfg)).batteries_implied, 5);
    cfg.policy = Policy::Fixed;
    cfg.fixed_active = 35;
    cfg.load_mode = LoadMode::Table;
    EXPECT_EQ(summarize(run(cfg)).batteries_implied, 4);
}
