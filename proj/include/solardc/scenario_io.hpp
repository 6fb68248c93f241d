#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "irradiance_csv.hpp"
#include "report.hpp"
#include "scenario.hpp"
#include "sim_engine.hpp"
#include "solar_model.hpp"
#include "storage_model.hpp"
#include "text.hpp"

namespace solardc {

struct Table2Row {
    int n_active = 0;
    Watts power = 0.0;
    WattHours energy = 0.0;
    WattHours effective = 0.0;
    std::int64_t batteries = 0;
};

/// Runs every lookup-table row through the night-backup battery pipeline,
/// largest server count first.
inline std::vector<Table2Row> reproduce_table2(const Scenario& s) {
    if (!s.has_lookup_table())
        throw ConfigError("scenario has no lookup table (lookup.servers_<N>_w)");
    const Hours hours = s.sim.night.length();
    std::vector<Table2Row> rows;
    for (auto it = s.sim.lookup_table.rbegin(); it != s.sim.lookup_table.rend(); ++it) {
        const auto sized = size_batteries(it->second, hours, s.sim.bank.spec);
        rows.push_back({it->first, sized.power, sized.energy, sized.effective, sized.batteries});
    }
    return rows;
}

/// MW / MWh columns, as the table is usually quoted.
inline std::string table2_csv(const std::vector<Table2Row>& rows) {
    using detail::format_double;
    std::ostringstream out;
    out << "n_active,power_mw,energy_mwh,effective_mwh,batteries\n";
    for (const auto& r : rows)
        out << r.n_active << ',' << format_double(r.power / 1e6) << ',' << format_double(r.energy / 1e6) << ','
            << format_double(r.effective / 1e6) << ',' << r.batteries << '\n';
    return out.str();
}

/// PV sizing for the scenario's night-energy target against `profile`.
inline ArraySizing size_pv(const Scenario& s, const IrradianceProfile& profile) {
    return size_array(s.sizing_target(), daily_insolation(profile), s.sim.panel, s.area_round_up_to);
}

/// Battery count the night-backup pipeline asks for at full fleet.
inline BatterySizing size_scenario_batteries(const Scenario& s) {
    return size_batteries(s.full_load_power(), s.sim.night.length(), s.sim.bank.spec);
}

inline Report build_report(const Scenario& s, const SimulationTrace& trace) {
    Report r;
    r.scenario = s.name;
    r.summary = summarize(trace);
    if (s.has_profile())
        r.sizing = size_pv(s, s.sim.profile);
    r.batteries_installed = s.sim.bank.count;
    r.batteries_required = size_scenario_batteries(s).batteries;
    return r;
}

} // namespace solardc
