#pragma once

// ON/OFF consolidation: keep as many servers ON through the night as the
// battery energy allows, switch the rest OFF, and spread demand over the
// survivors.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "power_model.hpp"
#include "storage_model.hpp"
#include "units.hpp"

namespace solardc {

/// Aggregate night demand in server-equivalents. Empty means every ON server
/// runs at full load, so demand follows the active count.
struct NightDemand {
    std::optional<double> aggregate;

    static NightDemand full_load() { return {}; }
    static NightDemand of(double d) { return NightDemand{d}; }

    double for_active(int n_active) const { return aggregate.value_or(static_cast<double>(n_active)); }

    int min_active() const {
        if (!aggregate)
            return 1;
        return std::max(1, static_cast<int>(std::ceil(*aggregate)));
    }

    friend bool operator==(const NightDemand&, const NightDemand&) = default;
};

/// Supplies data-center power as a function of how many servers are ON.
template <class M>
concept NightLoadModel = requires(const M& m, int n, double d) {
    { m.server_count() } -> std::convertible_to<int>;
    { m.candidates() } -> std::convertible_to<std::vector<int>>;
    { m.power(n, d) } -> std::convertible_to<ActivePower>;
    { M::monotone } -> std::convertible_to<bool>;
};

/// Power from the utilization model in power_model.hpp.
struct ParametricLoad {
    DataCenterSpec dc;

    static constexpr bool monotone = true;

    int server_count() const { return dc.n_servers; }

    std::vector<int> candidates() const {
        std::vector<int> out(static_cast<std::size_t>(dc.n_servers));
        for (int i = 0; i < dc.n_servers; ++i)
            out[static_cast<std::size_t>(i)] = i + 1;
        return out;
    }

    ActivePower power(int n_active, double demand) const { return power_at_active(dc, n_active, demand); }
};

/// Power read from a measured active-servers -> watts table; only the
/// tabulated server counts are candidates.
struct TableLoad {
    DataCenterSpec dc;
    std::map<int, Watts> table;

    static constexpr bool monotone = false;

    int server_count() const { return dc.n_servers; }

    std::vector<int> candidates() const {
        std::vector<int> out;
        for (const auto& [n, p] : table)
            if (n >= 1 && n <= dc.n_servers)
                out.push_back(n);
        return out;
    }

    ActivePower power(int n_active, double demand) const {
        auto it = table.find(n_active);
        if (it == table.end())
            throw DomainError("no lookup-table power for " + std::to_string(n_active) + " active servers");
        ActivePower out;
        out.power = it->second;
        if (n_active > 0) {
            out.utilization = std::min(1.0, demand / n_active);
            out.unserved = std::max(0.0, demand - n_active);
        }
        return out;
    }
};

struct ConsolidationPlan {
    int n_active = 0;
    double per_server_utilization = 0.0;
    double unserved_demand = 0.0;
    Watts total_power = 0.0;
    WattHours night_energy = 0.0;
    WattHours effective_energy = 0.0;
    std::int64_t batteries_needed = 0;
    WattHours energy_saving = 0.0;
};

struct UtilizationSplit {
    double utilization = 0.0;
    double unserved = 0.0;
};

inline UtilizationSplit consolidate_utilization(double demand, int n_active) {
    if (n_active < 1)
        throw DomainError("consolidation needs at least one active server");
    if (!(demand >= 0.0))
        throw DomainError("aggregate demand must be >= 0");
    return {std::min(1.0, demand / n_active), std::max(0.0, demand - n_active)};
}

/// Positive when the solar production exceeds what the load consumed.
inline WattHours energy_saving(WattHours solar_production, WattHours consumption) {
    return solar_production - consumption;
}

/// Night energy and battery figures for running `n_active` servers.
template <NightLoadModel M>
ConsolidationPlan plan_for(const M& model, int n_active, const NightDemand& demand, const BatterySpec& spec,
                           Hours backup_hours) {
    const ActivePower p = model.power(n_active, demand.for_active(n_active));
    ConsolidationPlan plan;
    plan.n_active = n_active;
    plan.per_server_utilization = p.utilization;
    plan.unserved_demand = p.unserved;
    plan.total_power = p.power;
    plan.night_energy = backup_energy(p.power, backup_hours);
    plan.effective_energy = effective_energy(plan.night_energy, spec.efficiency);
    plan.batteries_needed = required_batteries(plan.effective_energy, spec);
    return plan;
}

/// Largest n_active whose effective night energy fits in `budget`. Savings are
/// measured against `reference_energy` when given, otherwise against the night
/// energy of the largest candidate (the whole fleet).
template <NightLoadModel M>
ConsolidationPlan max_active_for_budget(const M& model, const NightDemand& demand, const BatterySpec& spec,
                                        WattHours budget, Hours backup_hours,
                                        std::optional<WattHours> reference_energy = std::nullopt) {
    spec.validate();
    if (!(backup_hours >= 0.0))
        throw DomainError("backup window must be >= 0 h");
    if (demand.aggregate && !(*demand.aggregate >= 0.0))
        throw DomainError("aggregate demand must be >= 0");

    std::vector<int> cands = model.candidates();
    std::erase_if(cands, [&](int n) { return n < demand.min_active(); });
    if (cands.empty())
        throw InfeasibleError("no server count in [" + std::to_string(demand.min_active()) + ", " +
                              std::to_string(model.server_count()) + "] can carry the demand");

    auto fits = [&](int n) { return plan_for(model, n, demand, spec, backup_hours).effective_energy <= budget; };

    std::optional<int> best;
    if constexpr (M::monotone) {
        std::size_t lo = 0, hi = cands.size();  // first index that does not fit
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (fits(cands[mid]))
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo > 0)
            best = cands[lo - 1];
    } else {
        for (auto it = cands.rbegin(); it != cands.rend(); ++it)
            if (fits(*it)) {
                best = *it;
                break;
            }
    }

    if (!best) {
        const auto floor_plan = plan_for(model, cands.front(), demand, spec, backup_hours);
        throw InfeasibleError("even " + std::to_string(cands.front()) + " active servers need " +
                                  std::to_string(floor_plan.batteries_needed) + " batteries",
                              floor_plan.batteries_needed);
    }

    ConsolidationPlan plan = plan_for(model, *best, demand, spec, backup_hours);
    const WattHours reference =
        reference_energy ? *reference_energy : plan_for(model, cands.back(), demand, spec, backup_hours).night_energy;
    plan.energy_saving = energy_saving(reference, plan.night_energy);
    return plan;
}

template <NightLoadModel M>
ConsolidationPlan max_active_servers(const M& model, const NightDemand& demand, const BatteryBank& bank,
                                     Hours backup_hours, std::optional<WattHours> reference_energy = std::nullopt) {
    bank.validate();
    if (bank.count < 1)
        throw DomainError("consolidation needs at least one battery");
    return max_active_for_budget(model, demand, bank.spec, bank.capacity() - bank.floor(), backup_hours,
                                 reference_energy);
}

} // namespace solardc
