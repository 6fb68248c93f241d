#pragma once

// Report and trace serialization.
//
// Report JSON (key order is fixed):
//   {
//     "scenario": "<name>",
//     "summary":   { "<field>_wh": x, "<field>_wh_display": x3, ... },
//     "sizing":    { "required_area_m2": ..., ... } | null,
//     "batteries": { "installed": n, "required": n }
//   }
// Every real-valued field has a "_display" twin rounded to three significant
// figures. Integer counts carry no twin. The CSV form holds the same data as
// `field,value` rows with dotted field names.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "sim_engine.hpp"
#include "solar_model.hpp"
#include "text.hpp"

namespace solardc {

struct Report {
    std::string scenario;
    Summary summary;
    std::optional<ArraySizing> sizing;
    std::int64_t batteries_installed = 0;
    std::int64_t batteries_required = 0;

    friend bool operator==(const Report&, const Report&) = default;
};

enum class ReportFormat { Json, Csv };

namespace detail {

struct RealField {
    const char* name;
    double Summary::*member;
};

inline constexpr RealField kSummaryReals[] = {
    {"total_production_wh", &Summary::total_production},
    {"total_consumption_wh", &Summary::total_consumption},
    {"night_consumption_wh", &Summary::night_consumption},
    {"energy_saving_wh", &Summary::energy_saving},
    {"mps_percent", &Summary::mps},
    {"delta_e_wh", &Summary::delta_e},
    {"min_soc_wh", &Summary::min_soc},
    {"max_deficit_wh", &Summary::max_deficit},
    {"total_deficit_wh", &Summary::total_deficit},
    {"total_curtailed_wh", &Summary::total_curtailed},
};

struct SizingField {
    const char* name;
    double ArraySizing::*member;
};

inline constexpr SizingField kSizingReals[] = {
    {"required_area_m2", &ArraySizing::required_area},
    {"rounded_area_m2", &ArraySizing::rounded_area},
    {"daily_production_wh", &ArraySizing::daily_production},
};

/// Flattened (name, value, is_integer) rows shared by both encodings.
struct Row {
    std::string name;
    double real = 0.0;
    std::int64_t integer = 0;
    bool is_integer = false;
};

inline std::vector<Row> flatten(const Report& r) {
    std::vector<Row> rows;
    for (const auto& f : kSummaryReals)
        rows.push_back({std::string("summary.") + f.name, r.summary.*f.member});
    rows.push_back({"summary.batteries_implied", 0.0, r.summary.batteries_implied, true});
    if (r.sizing) {
        for (const auto& f : kSizingReals)
            rows.push_back({std::string("sizing.") + f.name, (*r.sizing).*f.member});
        rows.push_back({"sizing.panel_count", 0.0, r.sizing->panel_count, true});
    }
    rows.push_back({"batteries.installed", 0.0, r.batteries_installed, true});
    rows.push_back({"batteries.required", 0.0, r.batteries_required, true});
    return rows;
}

} // namespace detail

inline nlohmann::ordered_json to_json(const Report& r) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["scenario"] = r.scenario;

    ordered_json summary = ordered_json::object();
    for (const auto& f : detail::kSummaryReals) {
        summary[f.name] = r.summary.*f.member;
        summary[std::string(f.name) + "_display"] = detail::display_round(r.summary.*f.member);
    }
    summary["batteries_implied"] = r.summary.batteries_implied;
    j["summary"] = summary;

    if (r.sizing) {
        ordered_json sizing = ordered_json::object();
        for (const auto& f : detail::kSizingReals) {
            sizing[f.name] = (*r.sizing).*f.member;
            sizing[std::string(f.name) + "_display"] = detail::display_round((*r.sizing).*f.member);
        }
        sizing["panel_count"] = r.sizing->panel_count;
        j["sizing"] = sizing;
    } else {
        j["sizing"] = nullptr;
    }

    j["batteries"] = {{"installed", r.batteries_installed}, {"required", r.batteries_required}};
    return j;
}

inline Report report_from_json(const nlohmann::ordered_json& j) {
    try {
        Report r;
        r.scenario = j.at("scenario").get<std::string>();
        const auto& s = j.at("summary");
        for (const auto& f : detail::kSummaryReals)
            r.summary.*f.member = s.at(f.name).get<double>();
        r.summary.batteries_implied = s.at("batteries_implied").get<std::int64_t>();
        if (!j.at("sizing").is_null()) {
            ArraySizing a;
            const auto& z = j.at("sizing");
            for (const auto& f : detail::kSizingReals)
                a.*f.member = z.at(f.name).get<double>();
            a.panel_count = z.at("panel_count").get<std::int64_t>();
            r.sizing = a;
        }
        r.batteries_installed = j.at("batteries").at("installed").get<std::int64_t>();
        r.batteries_required = j.at("batteries").at("required").get<std::int64_t>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed report JSON: ") + e.what());
    }
}

inline std::string emit_report(const Report& r, ReportFormat format) {
    if (format == ReportFormat::Json)
        return to_json(r).dump(2) + '\n';

    std::ostringstream out;
    out << "field,value\n";
    out << "scenario," << r.scenario << '\n';
    for (const auto& row : detail::flatten(r)) {
        if (row.is_integer) {
            out << row.name << ',' << row.integer << '\n';
        } else {
            out << row.name << ',' << detail::format_double(row.real) << '\n';
            out << row.name << "_display," << detail::format_double(detail::display_round(row.real)) << '\n';
        }
    }
    return out.str();
}

inline Report parse_report(std::string_view text, ReportFormat format) {
    if (format == ReportFormat::Json) {
        try {
            return report_from_json(nlohmann::ordered_json::parse(text));
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("malformed report JSON: ") + e.what());
        }
    }

    Report r;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool has_sizing = false;
    ArraySizing sizing;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != "field,value")
                throw ParseError("expected header 'field,value'", 1, 1);
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("expected 'field,value'", line_no);
        const std::string name = line.substr(0, comma);
        const std::string_view value = std::string_view(line).substr(comma + 1);
        if (name == "scenario") {
            r.scenario = value;
            continue;
        }
        if (name.ends_with("_display"))
            continue;

        auto real = [&] {
            auto v = detail::parse_double(value);
            if (!v)
                throw ParseError("'" + name + "' is not a number", line_no, comma + 2);
            return *v;
        };
        auto integer = [&] {
            auto v = detail::parse_int(value);
            if (!v)
                throw ParseError("'" + name + "' is not an integer", line_no, comma + 2);
            return static_cast<std::int64_t>(*v);
        };

        bool known = false;
        for (const auto& f : detail::kSummaryReals)
            if (name == std::string("summary.") + f.name) {
                r.summary.*f.member = real();
                known = true;
            }
        for (const auto& f : detail::kSizingReals)
            if (name == std::string("sizing.") + f.name) {
                sizing.*f.member = real();
                has_sizing = known = true;
            }
        if (name == "summary.batteries_implied") {
            r.summary.batteries_implied = integer();
            known = true;
        } else if (name == "sizing.panel_count") {
            sizing.panel_count = integer();
            has_sizing = known = true;
        } else if (name == "batteries.installed") {
            r.batteries_installed = integer();
            known = true;
        } else if (name == "batteries.required") {
            r.batteries_required = integer();
            known = true;
        }
        if (!known)
            throw ParseError("unknown report field '" + name + "'", line_no, 1);
    }
    if (has_sizing)
        r.sizing = sizing;
    return r;
}

inline constexpr std::string_view kTraceHeader =
    "t_hours,solar_in_wh,load_wh,charge_wh,discharge_wh,soc_wh,curtailed_wh,deficit_wh,n_active";

inline std::string trace_csv(const SimulationTrace& trace) {
    using detail::format_double;
    std::ostringstream out;
    out << kTraceHeader << '\n';
    for (const auto& r : trace.records) {
        out << format_double(r.t) << ',' << format_double(r.solar_in) << ',' << format_double(r.load) << ','
            << format_double(r.charge) << ',' << format_double(r.discharge) << ',' << format_double(r.soc) << ','
            << format_double(r.curtailed) << ',' << format_double(r.deficit) << ',' << r.n_active << '\n';
    }
    return out.str();
}

} // namespace solardc
