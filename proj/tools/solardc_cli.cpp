// solardc: sizing and simulation front end.
//
// Exit codes: 0 success, 1 invalid input, 2 infeasible plan or sizing.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "solardc/solardc.hpp"

namespace {

using nlohmann::ordered_json;
using namespace solardc;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kInfeasible = 2;

void put(ordered_json& j, const std::string& key, double v) {
    j[key] = v;
    j[key + "_display"] = detail::display_round(v);
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    out << contents;
}

ordered_json plan_json(const ConsolidationPlan& p) {
    ordered_json j;
    j["n_active"] = p.n_active;
    put(j, "per_server_utilization", p.per_server_utilization);
    put(j, "total_power_w", p.total_power);
    put(j, "night_energy_wh", p.night_energy);
    put(j, "effective_energy_wh", p.effective_energy);
    j["batteries_needed"] = p.batteries_needed;
    put(j, "energy_saving_wh", p.energy_saving);
    return j;
}

int size_pv_cmd(const std::string& scenario_path, const std::string& irradiance_path) {
    const Scenario s = load_scenario(scenario_path);
    IrradianceProfile profile = s.sim.profile;
    if (!irradiance_path.empty())
        profile = load_irradiance_csv(irradiance_path);
    if (profile.size() < 2)
        throw ConfigError("no irradiance profile: pass --irradiance or set irradiance.file");

    const WhPerSquareMeter insolation = daily_insolation(profile);
    const auto peak = peak_irradiance(profile);
    const WattHours target = s.sizing_target();
    const ArraySizing sizing = size_array(target, insolation, s.sim.panel, s.area_round_up_to);

    ordered_json j;
    j["scenario"] = s.name;
    put(j, "target_energy_wh", target);
    put(j, "insolation_wh_m2", insolation);
    j["peak_hour"] = peak.hour;
    j["peak_irradiance_wm2"] = peak.irradiance;
    put(j, "panel_area_m2", s.sim.panel.area());
    put(j, "required_area_m2", sizing.required_area);
    put(j, "rounded_area_m2", sizing.rounded_area);
    j["panel_count"] = sizing.panel_count;
    put(j, "daily_production_wh", sizing.daily_production);
    put(j, "mps_per_m2_percent", mps(insolation, target));
    put(j, "delta_e_wh", delta_e(sizing.daily_production, target));
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int size_batteries_cmd(const std::string& scenario_path) {
    const Scenario s = load_scenario(scenario_path);
    const auto sized = size_scenario_batteries(s);

    ordered_json j;
    j["scenario"] = s.name;
    put(j, "power_w", sized.power);
    j["backup_hours"] = s.sim.night.length();
    put(j, "energy_wh", sized.energy);
    put(j, "effective_energy_wh", sized.effective);
    j["battery_capacity_wh"] = s.sim.bank.spec.capacity_wh();
    j["batteries_required"] = sized.batteries;
    j["batteries_installed"] = s.sim.bank.count;

    int rc = kOk;
    if (s.sim.bank.count >= 1) {
        try {
            const ConsolidationPlan plan =
                s.sim.load_mode == LoadMode::Table
                    ? max_active_servers(TableLoad{s.sim.dc, s.sim.lookup_table}, s.sim.night_demand, s.sim.bank,
                                         s.sim.night.length())
                    : max_active_servers(ParametricLoad{s.sim.dc}, s.sim.night_demand, s.sim.bank,
                                         s.sim.night.length());
            j["night_plan"] = plan_json(plan);
        } catch (const InfeasibleError& e) {
            j["night_plan"] = nullptr;
            j["min_batteries"] = e.min_batteries();
            std::cerr << "infeasible: " << e.what() << '\n';
            rc = kInfeasible;
        }
    }
    std::cout << j.dump(2) << '\n';
    return rc;
}

int simulate_cmd(const std::string& scenario_path, std::optional<int> days, const std::string& trace_path,
                 const std::string& report_path) {
    Scenario s = load_scenario(scenario_path);
    if (days) {
        if (*days < 1)
            throw ConfigError("--days must be >= 1");
        s.sim.days = *days;
    }
    const SimulationTrace trace = run(s.sim);
    const Report report = build_report(s, trace);
    const std::string json = emit_report(report, ReportFormat::Json);

    if (!trace_path.empty())
        write_file(trace_path, trace_csv(trace));
    if (!report_path.empty())
        write_file(report_path, json);
    else
        std::cout << json;
    return kOk;
}

int table2_cmd(const std::string& scenario_path) {
    const Scenario s = load_scenario(scenario_path);
    std::cout << table2_csv(reproduce_table2(s));
    return kOk;
}

int metrics_cmd(double production, double consumption) {
    if (!(production >= 0.0) || !(consumption >= 0.0))
        throw DomainError("production and consumption must be >= 0");
    ordered_json j;
    put(j, "mps_percent", mps(production, consumption));
    put(j, "delta_e_wh", delta_e(production, consumption));
    std::cout << j.dump(2) << '\n';
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solar-powered data center sizing and simulation"};
    app.require_subcommand(1);

    std::string scenario, irradiance, trace_out, report_out;
    std::optional<int> days;
    double production = 0.0, consumption = 0.0;

    auto* pv = app.add_subcommand("size-pv", "Size the PV array for the scenario's night energy");
    pv->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    pv->add_option("--irradiance", irradiance, "Irradiance CSV (overrides irradiance.file)")->check(CLI::ExistingFile);

    auto* bat = app.add_subcommand("size-batteries", "Battery count for night backup and the ON/OFF night plan");
    bat->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);

    auto* sim = app.add_subcommand("simulate", "Run the hourly energy balance");
    sim->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    sim->add_option("--days", days, "Number of days (overrides sim.days)");
    sim->add_option("--trace", trace_out, "Write the per-step trace CSV here");
    sim->add_option("--report", report_out, "Write the JSON report here (default: stdout)");

    auto* t2 = app.add_subcommand("reproduce-table2", "Battery pipeline over the scenario's lookup table");
    t2->add_option("--scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);

    auto* met = app.add_subcommand("metrics", "MPS and energy surplus for a production/consumption pair");
    met->add_option("--production", production, "Renewable production, Wh")->required();
    met->add_option("--consumption", consumption, "Energy consumption, Wh")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    try {
        if (*pv)
            return size_pv_cmd(scenario, irradiance);
        if (*bat)
            return size_batteries_cmd(scenario);
        if (*sim)
            return simulate_cmd(scenario, days, trace_out, report_out);
        if (*t2)
            return table2_cmd(scenario);
        if (*met)
            return metrics_cmd(production, consumption);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return kInvalid;
}
