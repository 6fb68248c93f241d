#pragma once

// Hourly energy balance of a solar + battery powered data center.
//
// Each step: solar serves the load first, any surplus charges the bank and
// what does not fit is curtailed; the remaining load is drawn from the bank
// and whatever the bank cannot deliver is recorded as deficit. During the
// night window the policy decides how many servers stay ON.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "consolidation.hpp"
#include "errors.hpp"
#include "power_model.hpp"
#include "solar_model.hpp"
#include "storage_model.hpp"
#include "units.hpp"

namespace solardc {

enum class Policy { AlwaysOn, Consolidate, Fixed };
enum class LoadMode { Parametric, Table };

/// Hours-of-day interval [start, end), wrapping past midnight when start > end.
struct NightWindow {
    Hours start = 17.0;
    Hours end = 7.0;

    void validate() const {
        if (!(start >= 0.0 && start < 24.0) || !(end >= 0.0 && end < 24.0))
            throw ConfigError("night window hours must be in [0, 24)");
        if (start == end)
            throw ConfigError("night window start and end must differ");
    }

    Hours length() const { return std::fmod(end - start + 24.0, 24.0); }

    bool contains(Hours hour_of_day) const {
        if (start < end)
            return hour_of_day >= start && hour_of_day < end;
        return hour_of_day >= start || hour_of_day < end;
    }

    /// Hours left in the window from `hour_of_day`, which must be inside it.
    Hours remaining_from(Hours hour_of_day) const { return std::fmod(end - hour_of_day + 24.0, 24.0); }

    friend bool operator==(const NightWindow&, const NightWindow&) = default;
};

struct SimulationConfig {
    DataCenterSpec dc;
    PanelSpec panel;
    std::int64_t panel_count = 0;
    BatteryBank bank;
    IrradianceProfile profile;
    NightWindow night;
    Hours step = 1.0;
    int days = 1;
    Policy policy = Policy::AlwaysOn;
    int fixed_active = 0;           ///< night ON count for Policy::Fixed
    bool replan_each_step = false;  ///< Consolidate: re-plan at every night step instead of once per window
    LoadMode load_mode = LoadMode::Parametric;
    std::map<int, Watts> lookup_table;
    NightDemand night_demand;
    std::optional<double> day_demand;  ///< aggregate daytime demand; empty = full load on every server
    double inverter_efficiency = 1.0;
    std::optional<WattHours> initial_soc;  ///< empty = bank full
    std::optional<Hours> start_hour;       ///< empty = end of the night window (sunrise)

    Hours first_hour() const { return start_hour.value_or(night.end); }

    std::int64_t step_count() const { return std::llround(24.0 * days / step); }

    void validate() const {
        dc.validate();
        panel.validate();
        bank.validate();
        night.validate();
        if (profile.size() < 2)
            throw ConfigError("simulation needs an irradiance profile with at least 2 samples");
        if (!(step > 0.0))
            throw ConfigError("step must be > 0");
        if (days < 1)
            throw ConfigError("days must be >= 1");
        if (panel_count < 0)
            throw ConfigError("panel_count must be >= 0");
        if (std::abs(static_cast<double>(step_count()) * step - 24.0 * days) > 1e-9 * days)
            throw ConfigError("step must divide the simulated span evenly");
        if (!(inverter_efficiency > 0.0 && inverter_efficiency <= 1.0))
            throw ConfigError("inverter efficiency must be in (0, 1]");
        if (initial_soc && !(*initial_soc >= 0.0 && *initial_soc <= bank.capacity()))
            throw ConfigError("initial state of charge must be within [0, bank capacity]");
        if (start_hour && !(*start_hour >= 0.0 && *start_hour < 24.0))
            throw ConfigError("start hour must be in [0, 24)");
        if (day_demand && !(*day_demand >= 0.0))
            throw ConfigError("day demand must be >= 0");
        if (policy == Policy::Fixed && (fixed_active < 0 || fixed_active > dc.n_servers))
            throw ConfigError("fixed active count must be in [0, n_servers]");
        if (load_mode == LoadMode::Table && lookup_table.empty())
            throw ConfigError("table load mode needs a lookup table");
    }
};

struct StepRecord {
    Hours t = 0.0;  ///< start of the step, hours since midnight of day 0
    bool night = false;
    WattHours solar_in = 0.0;
    WattHours load = 0.0;
    WattHours charge = 0.0;     ///< accepted into the bank
    WattHours discharge = 0.0;  ///< delivered by the bank
    WattHours soc = 0.0;        ///< stored energy at the end of the step
    WattHours curtailed = 0.0;
    WattHours deficit = 0.0;
    int n_active = 0;

    WattHours load_served() const { return load - deficit; }

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct SimulationTrace {
    std::vector<StepRecord> records;
    BatterySpec battery;
    Hours step = 1.0;

    bool empty() const noexcept { return records.empty(); }
    friend bool operator==(const SimulationTrace&, const SimulationTrace&) = default;
};

namespace detail {

inline WhPerSquareMeter insolation_over_step(const IrradianceProfile& profile, Hours hour_of_day, Hours step) {
    Hours from = hour_of_day;
    Hours remaining = step;
    WhPerSquareMeter sum = 0.0;
    while (remaining > 0.0) {
        const Hours to = std::min(24.0, from + remaining);
        sum += insolation_between(profile, from, to);
        remaining -= to - from;
        from = 0.0;
    }
    return sum;
}

inline void check_conservation(const StepRecord& r) {
    const double lhs = r.solar_in + r.discharge;
    const double rhs = r.load_served() + r.charge + r.curtailed;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (std::abs(lhs - rhs) > 1e-9 * scale)
        throw std::logic_error("energy not conserved at t=" + std::to_string(r.t));
}

template <NightLoadModel M>
SimulationTrace run_with(const SimulationConfig& cfg, const M& model) {
    const std::int64_t steps = cfg.step_count();
    const double panel_area = static_cast<double>(cfg.panel_count) * cfg.panel.area() *
                              cfg.panel.conversion_efficiency * cfg.inverter_efficiency;
    const int n_servers = cfg.dc.n_servers;
    const double day_d = cfg.day_demand.value_or(static_cast<double>(n_servers));
    const Watts day_power = model.power(n_servers, day_d).power;

    SimulationTrace trace;
    trace.battery = cfg.bank.spec;
    trace.step = cfg.step;
    trace.records.reserve(static_cast<std::size_t>(steps));

    StateOfCharge soc{cfg.initial_soc.value_or(cfg.bank.capacity())};
    bool prev_night = false;
    int night_active = n_servers;

    auto plan_night = [&](Hours hour_of_day) {
        switch (cfg.policy) {
        case Policy::AlwaysOn:
            return n_servers;
        case Policy::Fixed:
            return cfg.fixed_active;
        case Policy::Consolidate:
            break;
        }
        const Hours window = cfg.night.remaining_from(hour_of_day);
        const WattHours budget = std::max(0.0, soc.stored - cfg.bank.floor());
        try {
            return max_active_for_budget(model, cfg.night_demand, cfg.bank.spec, budget, window).n_active;
        } catch (const InfeasibleError&) {
            // Nothing fits: run the smallest configuration and let the deficit show.
            auto cands = model.candidates();
            auto it = std::find_if(cands.begin(), cands.end(),
                                   [&](int n) { return n >= cfg.night_demand.min_active(); });
            return it != cands.end() ? *it : cands.back();
        }
    };

    for (std::int64_t i = 0; i < steps; ++i) {
        StepRecord r;
        r.t = cfg.first_hour() + static_cast<double>(i) * cfg.step;
        const Hours hour_of_day = std::fmod(r.t, 24.0);
        r.night = cfg.night.contains(hour_of_day);

        Watts power = day_power;
        r.n_active = n_servers;
        if (r.night) {
            if (!prev_night || (cfg.policy == Policy::Consolidate && cfg.replan_each_step))
                night_active = plan_night(hour_of_day);
            r.n_active = night_active;
            power = night_active == 0 ? 0.0 : model.power(night_active, cfg.night_demand.for_active(night_active)).power;
        }
        prev_night = r.night;

        r.solar_in = panel_area * insolation_over_step(cfg.profile, hour_of_day, cfg.step);
        r.load = power * cfg.step;

        const WattHours direct = std::min(r.solar_in, r.load);
        const auto charged = charge(soc, cfg.bank, r.solar_in - direct);
        const auto drawn = discharge(charged.state, cfg.bank, r.load - direct);
        soc = drawn.state;

        r.charge = charged.accepted;
        r.curtailed = charged.curtailed;
        r.discharge = drawn.delivered;
        r.deficit = drawn.deficit;
        r.soc = soc.stored;
        check_conservation(r);
        trace.records.push_back(r);
    }
    return trace;
}

} // namespace detail

inline SimulationTrace run(const SimulationConfig& cfg) {
    cfg.validate();
    if (cfg.load_mode == LoadMode::Table)
        return detail::run_with(cfg, TableLoad{cfg.dc, cfg.lookup_table});
    return detail::run_with(cfg, ParametricLoad{cfg.dc});
}

struct Summary {
    WattHours total_production = 0.0;
    WattHours total_consumption = 0.0;
    WattHours night_consumption = 0.0;
    WattHours energy_saving = 0.0;  ///< production minus night-window consumption
    double mps = 0.0;               ///< production / total consumption, percent
    WattHours delta_e = 0.0;        ///< production minus total consumption
    WattHours min_soc = 0.0;
    WattHours max_deficit = 0.0;  ///< largest single-step deficit
    WattHours total_deficit = 0.0;
    WattHours total_curtailed = 0.0;
    std::int64_t batteries_implied = 0;  ///< for the most demanding night

    friend bool operator==(const Summary&, const Summary&) = default;
};

inline Summary summarize(const SimulationTrace& trace) {
    if (trace.empty())
        throw DomainError("cannot summarize an empty trace");

    Summary s;
    s.min_soc = trace.records.front().soc;
    WattHours this_night = 0.0;
    WattHours worst_night = 0.0;
    for (const auto& r : trace.records) {
        s.total_production += r.solar_in;
        s.total_consumption += r.load;
        s.total_deficit += r.deficit;
        s.total_curtailed += r.curtailed;
        s.min_soc = std::min(s.min_soc, r.soc);
        s.max_deficit = std::max(s.max_deficit, r.deficit);
        if (r.night) {
            s.night_consumption += r.load;
            this_night += r.load;
            worst_night = std::max(worst_night, this_night);
        } else {
            this_night = 0.0;
        }
    }
    s.energy_saving = energy_saving(s.total_production, s.night_consumption);
    s.delta_e = delta_e(s.total_production, s.total_consumption);
    s.mps = s.total_consumption > 0.0 ? mps(s.total_production, s.total_consumption) : 0.0;
    s.batteries_implied = required_batteries(effective_energy(worst_night, trace.battery.efficiency), trace.battery);
    return s;
}

} // namespace solardc
