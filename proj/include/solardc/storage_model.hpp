#pragma once

// Battery sizing pipeline and a lossy state-of-charge model.
//
// Efficiency follows the sizing convention used throughout: the night's energy
// demand is multiplied by the efficiency to get the "effective" energy that
// has to fit in the bank, and on discharge only stored*efficiency reaches the
// load. Charging is lossless.

#include <algorithm>
#include <cstdint>
#include <string>

#include "errors.hpp"
#include "units.hpp"

namespace solardc {

struct BatterySpec {
    double amp_hours = 10000.0;
    double voltage = 48.0;
    double efficiency = 0.8;

    WattHours capacity_wh() const noexcept { return amp_hours * voltage; }

    void validate() const {
        if (!(amp_hours > 0.0))
            throw DomainError("battery amp_hours must be > 0");
        if (!(voltage > 0.0))
            throw DomainError("battery voltage must be > 0");
        if (!(efficiency > 0.0 && efficiency <= 1.0))
            throw DomainError("battery efficiency must be in (0, 1]");
    }

    friend bool operator==(const BatterySpec&, const BatterySpec&) = default;
};

struct BatteryBank {
    BatterySpec spec;
    std::int64_t count = 0;
    double min_soc_fraction = 0.0;  ///< discharge floor as a fraction of capacity

    WattHours capacity() const noexcept { return static_cast<double>(count) * spec.capacity_wh(); }
    WattHours floor() const noexcept { return min_soc_fraction * capacity(); }

    void validate() const {
        spec.validate();
        if (count < 0)
            throw DomainError("battery count must be >= 0");
        if (!(min_soc_fraction >= 0.0 && min_soc_fraction < 1.0))
            throw DomainError("battery min_soc_fraction must be in [0, 1)");
    }

    friend bool operator==(const BatteryBank&, const BatteryBank&) = default;
};

struct StateOfCharge {
    WattHours stored = 0.0;

    friend bool operator==(const StateOfCharge&, const StateOfCharge&) = default;
};

inline WattHours battery_capacity_wh(const BatterySpec& spec) {
    spec.validate();
    return spec.capacity_wh();
}

inline WattHours backup_energy(Watts total_power, Hours backup_hours) {
    if (!(total_power >= 0.0) || !(backup_hours >= 0.0))
        throw DomainError("backup energy needs non-negative power and duration");
    return total_power * backup_hours;
}

inline WattHours effective_energy(WattHours total_energy, double efficiency) {
    if (!(efficiency > 0.0 && efficiency <= 1.0))
        throw DomainError("battery efficiency must be in (0, 1]");
    return total_energy * efficiency;
}

/// Smallest n with n * capacity >= effective; 0 when nothing is needed.
inline std::int64_t required_batteries(WattHours effective, const BatterySpec& spec) {
    spec.validate();
    if (!(effective >= 0.0))
        throw DomainError("effective energy must be >= 0");
    return detail::ceil_count(effective, spec.capacity_wh());
}

/// Result of the three-step sizing pipeline for one constant power level.
struct BatterySizing {
    Watts power = 0.0;
    WattHours energy = 0.0;
    WattHours effective = 0.0;
    std::int64_t batteries = 0;
};

inline BatterySizing size_batteries(Watts power, Hours backup_hours, const BatterySpec& spec) {
    BatterySizing out;
    out.power = power;
    out.energy = backup_energy(power, backup_hours);
    out.effective = effective_energy(out.energy, spec.efficiency);
    out.batteries = required_batteries(out.effective, spec);
    return out;
}

struct ChargeResult {
    StateOfCharge state;
    WattHours accepted = 0.0;
    WattHours curtailed = 0.0;
};

inline ChargeResult charge(StateOfCharge state, const BatteryBank& bank, WattHours energy_in) {
    if (!(energy_in >= 0.0))
        throw DomainError("charge energy must be >= 0");
    const WattHours headroom = std::max(0.0, bank.capacity() - state.stored);
    ChargeResult out;
    out.accepted = std::min(energy_in, headroom);
    out.curtailed = energy_in - out.accepted;
    out.state.stored = state.stored + out.accepted;
    if (out.accepted == headroom)
        out.state.stored = std::max(state.stored, bank.capacity());
    return out;
}

struct DischargeResult {
    StateOfCharge state;
    WattHours delivered = 0.0;
    WattHours deficit = 0.0;
};

inline WattHours deliverable(StateOfCharge state, const BatteryBank& bank) {
    return std::max(0.0, state.stored - bank.floor()) * bank.spec.efficiency;
}

inline DischargeResult discharge(StateOfCharge state, const BatteryBank& bank, WattHours demand) {
    if (!(demand >= 0.0))
        throw DomainError("discharge demand must be >= 0");
    const WattHours available = deliverable(state, bank);
    DischargeResult out;
    if (demand >= available) {
        out.delivered = available;
        out.state.stored = available > 0.0 ? std::min(state.stored, bank.floor()) : state.stored;
    } else {
        out.delivered = demand;
        out.state.stored = std::max(bank.floor(), state.stored - demand / bank.spec.efficiency);
    }
    out.deficit = demand - out.delivered;
    return out;
}

} // namespace solardc
