#pragma once

// Scenario files are flat `key = value` text, one setting per line, with
// dotted section prefixes. Blank lines and lines starting with '#' are
// ignored. Units are SI base units named in the key suffix (_w, _wh, _m,
// _h, _ah, _v). Unknown or repeated keys are rejected.
//
//   name                       free text
//   description                free text
//   datacenter.servers         integer >= 1
//   datacenter.networking_w    >= 0
//   datacenter.storage_w       >= 0
//   datacenter.other_infra_w   >= 0
//   server.p_max_w             > 0
//   server.k_idle              [0, 1]
//   cooling.group_power_w      >= 0
//   cooling.servers_per_group  integer >= 1
//   panel.length_m, panel.width_m   > 0
//   panel.cells                integer >= 1
//   panel.conversion_efficiency     (0, 1]
//   panel.count                integer >= 0
//   sizing.area_round_up_m2    > 0
//   sizing.target_energy_wh    > 0 (default: full-fleet night energy)
//   battery.capacity_ah, battery.voltage_v   > 0
//   battery.efficiency         (0, 1]
//   battery.count              integer >= 0
//   battery.min_soc_fraction   [0, 1)
//   battery.initial_soc_wh     >= 0 (default: full)
//   night.start_h, night.end_h [0, 24), distinct
//   sim.step_h                 > 0
//   sim.days                   integer >= 1
//   sim.policy                 always-on | consolidate | fixed
//   sim.fixed_active           integer, night ON count for policy fixed
//   sim.replan_each_step       true | false
//   sim.load_model             parametric | table
//   sim.inverter_efficiency    (0, 1]
//   sim.start_h                [0, 24) (default: night.end_h)
//   demand.night_aggregate     >= 0 server-equivalents (default: full load)
//   demand.day_aggregate       >= 0 server-equivalents (default: full load)
//   irradiance.file            CSV path, relative to the scenario file
//   irradiance.samples         inline "hour:value" pairs separated by spaces
//   lookup.servers_<N>_w       measured total power with N servers ON

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "irradiance_csv.hpp"
#include "power_model.hpp"
#include "sim_engine.hpp"
#include "solar_model.hpp"
#include "storage_model.hpp"
#include "text.hpp"

namespace solardc {

struct Scenario {
    std::string name;
    std::string description;
    SimulationConfig sim;
    SquareMeters area_round_up_to = 1.0;
    std::optional<WattHours> target_daily_energy;

    bool has_profile() const { return sim.profile.size() >= 2; }
    bool has_lookup_table() const { return !sim.lookup_table.empty(); }

    /// Full-fleet power from whichever load model the scenario selects.
    Watts full_load_power() const {
        if (sim.load_mode == LoadMode::Table)
            return TableLoad{sim.dc, sim.lookup_table}.power(sim.dc.n_servers, sim.dc.n_servers).power;
        return power_at_active(sim.dc, sim.dc.n_servers, sim.dc.n_servers).power;
    }

    /// Target for PV sizing: explicit, or the full-fleet energy over the night window.
    WattHours sizing_target() const {
        return target_daily_energy.value_or(backup_energy(full_load_power(), sim.night.length()));
    }
};

inline bool operator==(const Scenario& a, const Scenario& b) {
    const auto& x = a.sim;
    const auto& y = b.sim;
    auto same_dc = [](const DataCenterSpec& p, const DataCenterSpec& q) {
        return p.n_servers == q.n_servers && p.server.p_max == q.server.p_max && p.server.k_idle == q.server.k_idle &&
               p.networking_power == q.networking_power && p.storage_power == q.storage_power &&
               p.cooling.power_per_group == q.cooling.power_per_group &&
               p.cooling.servers_per_group == q.cooling.servers_per_group &&
               p.other_infra_power == q.other_infra_power;
    };
    return a.name == b.name && a.description == b.description && a.area_round_up_to == b.area_round_up_to &&
           a.target_daily_energy == b.target_daily_energy && same_dc(x.dc, y.dc) && x.panel == y.panel &&
           x.panel_count == y.panel_count && x.bank == y.bank && x.profile == y.profile && x.night == y.night &&
           x.step == y.step && x.days == y.days && x.policy == y.policy && x.fixed_active == y.fixed_active &&
           x.replan_each_step == y.replan_each_step && x.load_mode == y.load_mode &&
           x.lookup_table == y.lookup_table && x.night_demand == y.night_demand && x.day_demand == y.day_demand &&
           x.inverter_efficiency == y.inverter_efficiency && x.initial_soc == y.initial_soc &&
           x.start_hour == y.start_hour;
}

namespace detail {

struct FieldError {
    std::string message;
};

inline double need_double(std::string_view v) {
    auto d = parse_double(v);
    if (!d)
        throw FieldError{"expected a number, got '" + std::string(v) + "'"};
    return *d;
}

inline long long need_int(std::string_view v) {
    auto i = parse_int(v);
    if (!i)
        throw FieldError{"expected an integer, got '" + std::string(v) + "'"};
    return *i;
}

inline double in_range(double v, double lo, double hi, bool lo_open, bool hi_open, const char* rule) {
    const bool ok_lo = lo_open ? v > lo : v >= lo;
    const bool ok_hi = hi_open ? v < hi : v <= hi;
    if (!ok_lo || !ok_hi)
        throw FieldError{std::string("must be ") + rule + ", got " + format_double(v)};
    return v;
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double nonneg(std::string_view v) { return in_range(need_double(v), 0, kInf, false, true, ">= 0"); }
inline double positive(std::string_view v) { return in_range(need_double(v), 0, kInf, true, true, "> 0"); }
inline double fraction(std::string_view v) { return in_range(need_double(v), 0, 1, false, false, "in [0, 1]"); }
inline double efficiency(std::string_view v) { return in_range(need_double(v), 0, 1, true, false, "in (0, 1]"); }
inline double hour_of_day(std::string_view v) { return in_range(need_double(v), 0, 24, false, true, "in [0, 24)"); }

inline long long int_at_least(std::string_view v, long long lo) {
    const auto i = need_int(v);
    if (i < lo)
        throw FieldError{"must be >= " + std::to_string(lo) + ", got " + std::to_string(i)};
    return i;
}

inline bool need_bool(std::string_view v) {
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    throw FieldError{"expected true or false, got '" + std::string(v) + "'"};
}

inline std::string policy_name(Policy p) {
    switch (p) {
    case Policy::AlwaysOn:
        return "always-on";
    case Policy::Consolidate:
        return "consolidate";
    case Policy::Fixed:
        return "fixed";
    }
    return {};
}

inline Policy need_policy(std::string_view v) {
    for (auto p : {Policy::AlwaysOn, Policy::Consolidate, Policy::Fixed})
        if (v == policy_name(p))
            return p;
    throw FieldError{"expected always-on, consolidate or fixed, got '" + std::string(v) + "'"};
}

inline LoadMode need_load_mode(std::string_view v) {
    if (v == "parametric")
        return LoadMode::Parametric;
    if (v == "table")
        return LoadMode::Table;
    throw FieldError{"expected parametric or table, got '" + std::string(v) + "'"};
}

inline IrradianceProfile parse_inline_samples(std::string_view v) {
    std::vector<IrradianceSample> samples;
    std::istringstream in{std::string(v)};
    std::string token;
    while (in >> token) {
        const auto colon = token.find(':');
        if (colon == std::string::npos)
            throw FieldError{"expected hour:value pairs, got '" + token + "'"};
        const auto h = parse_double(std::string_view(token).substr(0, colon));
        const auto w = parse_double(std::string_view(token).substr(colon + 1));
        if (!h || !w)
            throw FieldError{"expected hour:value pairs, got '" + token + "'"};
        samples.push_back({*h, *w});
    }
    try {
        return IrradianceProfile(std::move(samples));
    } catch (const DomainError& e) {
        throw FieldError{e.what()};
    }
}

struct Field {
    std::string_view key;
    std::function<void(Scenario&, std::string_view)> read;
    std::function<std::optional<std::string>(const Scenario&)> write;
};

template <class T>
std::optional<std::string> opt_num(const std::optional<T>& v) {
    if (!v)
        return std::nullopt;
    return format_double(*v);
}

inline const std::vector<Field>& scenario_fields() {
    using S = Scenario;
    using O = std::optional<std::string>;
    auto num = [](double v) -> O { return format_double(v); };
    auto integer = [](long long v) -> O { return std::to_string(v); };

    static const std::vector<Field> fields = {
        {"name", [](S& s, std::string_view v) { s.name = v; }, [](const S& s) -> O { return s.name; }},
        {"description", [](S& s, std::string_view v) { s.description = v; },
         [](const S& s) -> O { return s.description; }},
        {"datacenter.servers", [](S& s, auto v) { s.sim.dc.n_servers = static_cast<int>(int_at_least(v, 1)); },
         [=](const S& s) { return integer(s.sim.dc.n_servers); }},
        {"datacenter.networking_w", [](S& s, auto v) { s.sim.dc.networking_power = nonneg(v); },
         [=](const S& s) { return num(s.sim.dc.networking_power); }},
        {"datacenter.storage_w", [](S& s, auto v) { s.sim.dc.storage_power = nonneg(v); },
         [=](const S& s) { return num(s.sim.dc.storage_power); }},
        {"datacenter.other_infra_w", [](S& s, auto v) { s.sim.dc.other_infra_power = nonneg(v); },
         [=](const S& s) { return num(s.sim.dc.other_infra_power); }},
        {"server.p_max_w", [](S& s, auto v) { s.sim.dc.server.p_max = positive(v); },
         [=](const S& s) { return num(s.sim.dc.server.p_max); }},
        {"server.k_idle", [](S& s, auto v) { s.sim.dc.server.k_idle = fraction(v); },
         [=](const S& s) { return num(s.sim.dc.server.k_idle); }},
        {"cooling.group_power_w", [](S& s, auto v) { s.sim.dc.cooling.power_per_group = nonneg(v); },
         [=](const S& s) { return num(s.sim.dc.cooling.power_per_group); }},
        {"cooling.servers_per_group",
         [](S& s, auto v) { s.sim.dc.cooling.servers_per_group = static_cast<int>(int_at_least(v, 1)); },
         [=](const S& s) { return integer(s.sim.dc.cooling.servers_per_group); }},
        {"panel.length_m", [](S& s, auto v) { s.sim.panel.length = positive(v); },
         [=](const S& s) { return num(s.sim.panel.length); }},
        {"panel.width_m", [](S& s, auto v) { s.sim.panel.width = positive(v); },
         [=](const S& s) { return num(s.sim.panel.width); }},
        {"panel.cells", [](S& s, auto v) { s.sim.panel.cells = static_cast<int>(int_at_least(v, 1)); },
         [=](const S& s) { return integer(s.sim.panel.cells); }},
        {"panel.conversion_efficiency", [](S& s, auto v) { s.sim.panel.conversion_efficiency = efficiency(v); },
         [=](const S& s) { return num(s.sim.panel.conversion_efficiency); }},
        {"panel.count", [](S& s, auto v) { s.sim.panel_count = int_at_least(v, 0); },
         [=](const S& s) { return integer(s.sim.panel_count); }},
        {"sizing.area_round_up_m2", [](S& s, auto v) { s.area_round_up_to = positive(v); },
         [=](const S& s) { return num(s.area_round_up_to); }},
        {"sizing.target_energy_wh", [](S& s, auto v) { s.target_daily_energy = positive(v); },
         [](const S& s) { return opt_num(s.target_daily_energy); }},
        {"battery.capacity_ah", [](S& s, auto v) { s.sim.bank.spec.amp_hours = positive(v); },
         [=](const S& s) { return num(s.sim.bank.spec.amp_hours); }},
        {"battery.voltage_v", [](S& s, auto v) { s.sim.bank.spec.voltage = positive(v); },
         [=](const S& s) { return num(s.sim.bank.spec.voltage); }},
        {"battery.efficiency", [](S& s, auto v) { s.sim.bank.spec.efficiency = efficiency(v); },
         [=](const S& s) { return num(s.sim.bank.spec.efficiency); }},
        {"battery.count", [](S& s, auto v) { s.sim.bank.count = int_at_least(v, 0); },
         [=](const S& s) { return integer(s.sim.bank.count); }},
        {"battery.min_soc_fraction",
         [](S& s, auto v) { s.sim.bank.min_soc_fraction = in_range(need_double(v), 0, 1, false, true, "in [0, 1)"); },
         [=](const S& s) { return num(s.sim.bank.min_soc_fraction); }},
        {"battery.initial_soc_wh", [](S& s, auto v) { s.sim.initial_soc = nonneg(v); },
         [](const S& s) { return opt_num(s.sim.initial_soc); }},
        {"night.start_h", [](S& s, auto v) { s.sim.night.start = hour_of_day(v); },
         [=](const S& s) { return num(s.sim.night.start); }},
        {"night.end_h", [](S& s, auto v) { s.sim.night.end = hour_of_day(v); },
         [=](const S& s) { return num(s.sim.night.end); }},
        {"sim.step_h", [](S& s, auto v) { s.sim.step = positive(v); }, [=](const S& s) { return num(s.sim.step); }},
        {"sim.days", [](S& s, auto v) { s.sim.days = static_cast<int>(int_at_least(v, 1)); },
         [=](const S& s) { return integer(s.sim.days); }},
        {"sim.policy", [](S& s, auto v) { s.sim.policy = need_policy(v); },
         [](const S& s) -> O { return policy_name(s.sim.policy); }},
        {"sim.fixed_active", [](S& s, auto v) { s.sim.fixed_active = static_cast<int>(int_at_least(v, 0)); },
         [=](const S& s) { return integer(s.sim.fixed_active); }},
        {"sim.replan_each_step", [](S& s, auto v) { s.sim.replan_each_step = need_bool(v); },
         [](const S& s) -> O { return s.sim.replan_each_step ? "true" : "false"; }},
        {"sim.load_model", [](S& s, auto v) { s.sim.load_mode = need_load_mode(v); },
         [](const S& s) -> O { return s.sim.load_mode == LoadMode::Table ? "table" : "parametric"; }},
        {"sim.inverter_efficiency", [](S& s, auto v) { s.sim.inverter_efficiency = efficiency(v); },
         [=](const S& s) { return num(s.sim.inverter_efficiency); }},
        {"sim.start_h", [](S& s, auto v) { s.sim.start_hour = hour_of_day(v); },
         [](const S& s) { return opt_num(s.sim.start_hour); }},
        {"demand.night_aggregate", [](S& s, auto v) { s.sim.night_demand.aggregate = nonneg(v); },
         [](const S& s) { return opt_num(s.sim.night_demand.aggregate); }},
        {"demand.day_aggregate", [](S& s, auto v) { s.sim.day_demand = nonneg(v); },
         [](const S& s) { return opt_num(s.sim.day_demand); }},
        {"irradiance.samples", [](S& s, auto v) { s.sim.profile = parse_inline_samples(v); },
         [](const S& s) -> O {
             if (!s.has_profile())
                 return std::nullopt;
             std::string out;
             for (const auto& smp : s.sim.profile.samples()) {
                 if (!out.empty())
                     out += ' ';
                 out += format_double(smp.hour) + ':' + format_double(smp.irradiance);
             }
             return out;
         }},
    };
    return fields;
}

inline constexpr std::string_view kLookupPrefix = "lookup.servers_";
inline constexpr std::string_view kLookupSuffix = "_w";

/// Checks that need more than one key; reported against the named field.
inline void validate_cross_fields(const Scenario& s) {
    auto fail = [](const char* field, const std::string& why) { throw ConfigError(std::string(field) + ": " + why); };
    try {
        s.sim.night.validate();
    } catch (const ConfigError& e) {
        fail("night.start_h", e.what());
    }
    if (s.sim.initial_soc && *s.sim.initial_soc > s.sim.bank.capacity())
        fail("battery.initial_soc_wh", "exceeds bank capacity of " + format_double(s.sim.bank.capacity()) + " Wh");
    if (s.sim.policy == Policy::Fixed && s.sim.fixed_active > s.sim.dc.n_servers)
        fail("sim.fixed_active", "exceeds datacenter.servers");
    if (s.sim.load_mode == LoadMode::Table && !s.has_lookup_table())
        fail("sim.load_model", "table mode needs lookup.servers_<N>_w entries");
    for (const auto& [n, p] : s.sim.lookup_table)
        if (n > s.sim.dc.n_servers)
            fail("lookup", "entry for " + std::to_string(n) + " servers exceeds datacenter.servers");
    const double steps = 24.0 * s.sim.days / s.sim.step;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
        fail("sim.step_h", "must divide 24 h evenly");
}

} // namespace detail

/// Parses scenario text. Relative irradiance.file paths resolve against `base_dir`.
inline Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {}) {
    using namespace detail;
    Scenario s;
    std::set<std::string, std::less<>> seen;
    std::string line;
    std::size_t line_no = 0;
    std::size_t settings = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#')
            continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected 'key = value'", line_no, 1);
        const auto key = trim(text.substr(0, eq));
        const auto value = trim(text.substr(eq + 1));
        const std::size_t value_col = static_cast<std::size_t>(value.data() - line.data()) + 1;
        if (key.empty())
            throw ParseError("missing key before '='", line_no, 1);
        if (!seen.insert(std::string(key)).second)
            throw ParseError("duplicate key '" + std::string(key) + "'", line_no, 1);
        ++settings;

        try {
            if (key.starts_with(kLookupPrefix) && key.ends_with(kLookupSuffix) &&
                key.size() > kLookupPrefix.size() + kLookupSuffix.size()) {
                const auto n_text = key.substr(kLookupPrefix.size(),
                                               key.size() - kLookupPrefix.size() - kLookupSuffix.size());
                const auto n = parse_int(n_text);
                if (!n || *n < 0)
                    throw ParseError("bad server count in '" + std::string(key) + "'", line_no, 1);
                s.sim.lookup_table[static_cast<int>(*n)] = nonneg(value);
                continue;
            }
            if (key == "irradiance.file") {
                if (seen.contains("irradiance.samples"))
                    throw FieldError{"conflicts with irradiance.samples"};
                std::filesystem::path p{std::string(value)};
                if (p.is_relative())
                    p = base_dir / p;
                s.sim.profile = load_irradiance_csv(p.string());
                continue;
            }
            if (key == "irradiance.samples" && seen.contains("irradiance.file"))
                throw FieldError{"conflicts with irradiance.file"};

            const auto& fields = scenario_fields();
            auto it = std::find_if(fields.begin(), fields.end(), [&](const Field& f) { return f.key == key; });
            if (it == fields.end())
                throw ParseError("unknown key '" + std::string(key) + "'", line_no, 1);
            it->read(s, value);
        } catch (const FieldError& e) {
            throw ParseError(std::string(key) + ": " + e.message, line_no, value_col);
        }
    }

    if (settings == 0)
        throw ParseError("scenario is empty", line_no + 1, 1);
    detail::validate_cross_fields(s);
    return s;
}

inline Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {}) {
    std::istringstream in(text);
    return parse_scenario(in, base_dir);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file '" + path + "'");
    try {
        return parse_scenario(in, std::filesystem::path(path).parent_path());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.message(), e.line(), e.column());
    }
}

/// Writes every setting, profile inline; parse_scenario reads it back unchanged.
inline std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    for (const auto& f : detail::scenario_fields())
        if (auto v = f.write(s))
            out << f.key << " = " << *v << '\n';
    for (const auto& [n, p] : s.sim.lookup_table)
        out << detail::kLookupPrefix << n << detail::kLookupSuffix << " = " << detail::format_double(p) << '\n';
    return out.str();
}

} // namespace solardc
