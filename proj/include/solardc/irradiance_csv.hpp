#pragma once

// Irradiance CSV:
//
//   # optional comment lines
//   hour,irradiance_wm2
//   7,10
//   8,95
//
// Hours are decimal hours of day in [0, 24], strictly increasing; irradiance
// in W/m^2, non-negative. Errors report the 1-based line number.

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "solar_model.hpp"
#include "text.hpp"

namespace solardc {

inline constexpr std::string_view kIrradianceHeader = "hour,irradiance_wm2";

inline IrradianceProfile parse_irradiance_csv(std::istream& in) {
    std::vector<IrradianceSample> samples;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;

    while (std::getline(in, line)) {
        ++line_no;
        const auto text = detail::trim(line);
        if (text.empty() || text.front() == '#')
            continue;
        if (!header_seen) {
            if (text != kIrradianceHeader)
                throw ParseError("expected header '" + std::string(kIrradianceHeader) + "'", line_no, 1);
            header_seen = true;
            continue;
        }

        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
            throw ParseError("expected exactly two columns", line_no);
        const auto hour = detail::parse_double(text.substr(0, comma));
        if (!hour)
            throw ParseError("hour is not a number", line_no, 1);
        const auto value = detail::parse_double(text.substr(comma + 1));
        if (!value)
            throw ParseError("irradiance is not a number", line_no, comma + 2);
        if (!(*hour >= 0.0 && *hour <= 24.0))
            throw ParseError("hour must be in [0, 24]", line_no, 1);
        if (*value < 0.0)
            throw ParseError("irradiance must be >= 0", line_no, comma + 2);
        if (!samples.empty() && !(*hour > samples.back().hour))
            throw ParseError("hour must be strictly greater than the previous row", line_no, 1);
        samples.push_back({*hour, *value});
    }

    if (!header_seen)
        throw ParseError("missing header '" + std::string(kIrradianceHeader) + "'", line_no + 1);
    if (samples.size() < 2)
        throw ParseError("need at least 2 irradiance rows", line_no + 1);
    return IrradianceProfile(std::move(samples));
}

inline IrradianceProfile load_irradiance_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open irradiance file '" + path + "'");
    try {
        return parse_irradiance_csv(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.message(), e.line(), e.column());
    }
}

inline std::string irradiance_csv(const IrradianceProfile& profile) {
    std::ostringstream out;
    out << kIrradianceHeader << '\n';
    for (const auto& s : profile.samples())
        out << detail::format_double(s.hour) << ',' << detail::format_double(s.irradiance) << '\n';
    return out.str();
}

} // namespace solardc
