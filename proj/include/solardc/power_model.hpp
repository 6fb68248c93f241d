#pragma once

// Utilization-proportional server power and the data-center power roll-up:
//   server      P(u) = k*Pmax + (1-k)*Pmax*u
//   IT load     sum of servers + networking + storage
//   total       IT load + cooling (per active group of servers) + other infrastructure

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "units.hpp"

namespace solardc {

/// CPU utilization of one server, a fraction in [0, 1].
class Utilization {
public:
    constexpr Utilization() = default;
    explicit Utilization(double value) : value_(value) {
        if (!(value >= 0.0 && value <= 1.0))
            throw DomainError("utilization must be in [0, 1], got " + std::to_string(value));
    }

    constexpr double value() const noexcept { return value_; }
    constexpr operator double() const noexcept { return value_; }

private:
    double value_ = 0.0;
};

struct ServerSpec {
    Watts p_max = 250.0;
    double k_idle = 0.7;  ///< idle power as a fraction of p_max

    Watts p_idle() const noexcept { return k_idle * p_max; }

    void validate() const {
        if (!(p_max > 0.0))
            throw DomainError("server p_max must be > 0");
        if (!(k_idle >= 0.0 && k_idle <= 1.0))
            throw DomainError("server k_idle must be in [0, 1]");
    }
};

/// One cooling unit of `power_per_group` serves up to `servers_per_group` active servers.
struct CoolingSpec {
    Watts power_per_group = 2500.0;
    int servers_per_group = 5;

    void validate() const {
        if (!(power_per_group >= 0.0))
            throw DomainError("cooling power_per_group must be >= 0");
        if (servers_per_group < 1)
            throw DomainError("cooling servers_per_group must be >= 1");
    }
};

struct DataCenterSpec {
    int n_servers = 100;
    ServerSpec server;
    Watts networking_power = 0.0;
    Watts storage_power = 0.0;
    CoolingSpec cooling;
    Watts other_infra_power = 0.0;

    void validate() const {
        if (n_servers < 1)
            throw DomainError("data center n_servers must be >= 1");
        server.validate();
        cooling.validate();
        if (!(networking_power >= 0.0) || !(storage_power >= 0.0) || !(other_infra_power >= 0.0))
            throw DomainError("data center power fields must be >= 0");
    }

    Watts fixed_it_power() const noexcept { return networking_power + storage_power; }
};

inline Watts server_power(const ServerSpec& spec, double u) {
    spec.validate();
    Utilization checked(u);
    return spec.k_idle * spec.p_max + (1.0 - spec.k_idle) * spec.p_max * checked.value();
}

/// Same curve parameterised by idle power instead of the idle fraction.
inline Watts server_power_idle_form(Watts p_idle, Watts p_max, double u) {
    if (!(p_idle >= 0.0) || !(p_idle <= p_max))
        throw DomainError("server power requires 0 <= p_idle <= p_max");
    Utilization checked(u);
    return p_idle + (p_max - p_idle) * checked.value();
}

/// Sum over the ON servers. OFF servers are simply absent from the list.
inline Watts aggregate_server_power(const ServerSpec& spec, std::span<const double> utilizations) {
    spec.validate();
    Watts total = 0.0;
    for (std::size_t i = 0; i < utilizations.size(); ++i) {
        const double u = utilizations[i];
        if (!(u >= 0.0 && u <= 1.0))
            throw DomainError("utilization at index " + std::to_string(i) + " must be in [0, 1], got " +
                              std::to_string(u));
        total += server_power(spec, u);
    }
    return total;
}

/// Cooling runs in whole units; a partially filled group costs a full unit.
inline Watts cooling_power(const CoolingSpec& cooling, int active_servers) {
    cooling.validate();
    if (active_servers < 0)
        throw DomainError("active server count must be >= 0");
    const int groups = (active_servers + cooling.servers_per_group - 1) / cooling.servers_per_group;
    return static_cast<double>(groups) * cooling.power_per_group;
}

inline Watts it_load(const DataCenterSpec& dc, std::span<const double> utilizations) {
    dc.validate();
    if (utilizations.size() > static_cast<std::size_t>(dc.n_servers))
        throw DomainError("got " + std::to_string(utilizations.size()) + " utilizations for " +
                          std::to_string(dc.n_servers) + " servers");
    return aggregate_server_power(dc.server, utilizations) + dc.networking_power + dc.storage_power;
}

inline Watts total_power(const DataCenterSpec& dc, std::span<const double> utilizations) {
    const Watts it = it_load(dc, utilizations);
    return it + cooling_power(dc.cooling, static_cast<int>(utilizations.size())) + dc.other_infra_power;
}

/// Non-IT share of total_power: cooling plus other infrastructure.
inline Watts non_it_load(const DataCenterSpec& dc, int active_servers) {
    return cooling_power(dc.cooling, active_servers) + dc.other_infra_power;
}

struct ActivePower {
    Watts power = 0.0;
    double utilization = 0.0;  ///< per-server utilization applied to every ON server
    double unserved = 0.0;     ///< demand that did not fit, in server-equivalents
};

/// n_active servers share aggregate demand D evenly, each at min(1, D / n_active).
inline ActivePower power_at_active(const DataCenterSpec& dc, int n_active, double demand) {
    dc.validate();
    if (!(demand >= 0.0))
        throw DomainError("aggregate demand must be >= 0");
    if (n_active == 0 && demand > 0.0)
        throw InfeasibleError("demand " + std::to_string(demand) + " cannot be served by 0 active servers");
    if (n_active < 0 || n_active > dc.n_servers)
        throw DomainError("n_active must be in [1, " + std::to_string(dc.n_servers) + "]");

    ActivePower out;
    if (n_active > 0) {
        out.utilization = std::min(1.0, demand / n_active);
        out.unserved = std::max(0.0, demand - n_active);
    }
    const std::vector<double> us(static_cast<std::size_t>(n_active), out.utilization);
    out.power = total_power(dc, us);
    return out;
}

} // namespace solardc
