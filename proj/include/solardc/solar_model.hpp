#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "units.hpp"

namespace solardc {

struct IrradianceSample {
    Hours hour = 0.0;
    WattsPerSquareMeter irradiance = 0.0;

    friend bool operator==(const IrradianceSample&, const IrradianceSample&) = default;
};

/// Hourly irradiance over one day, treated as piecewise linear between samples
/// and zero outside the sampled span.
class IrradianceProfile {
public:
    IrradianceProfile() = default;

    explicit IrradianceProfile(std::vector<IrradianceSample> samples) : samples_(std::move(samples)) {
        if (samples_.size() < 2)
            throw DomainError("irradiance profile needs at least 2 samples");
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            const auto& s = samples_[i];
            if (!(s.hour >= 0.0 && s.hour <= 24.0))
                throw DomainError("sample " + std::to_string(i) + ": hour must be in [0, 24]");
            if (!(s.irradiance >= 0.0))
                throw DomainError("sample " + std::to_string(i) + ": irradiance must be >= 0");
            if (i > 0 && !(s.hour > samples_[i - 1].hour))
                throw DomainError("sample " + std::to_string(i) + ": hours must be strictly increasing");
        }
    }

    const std::vector<IrradianceSample>& samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

    Hours first_hour() const { return samples_.front().hour; }
    Hours last_hour() const { return samples_.back().hour; }

    /// Linear interpolation between samples; 0 outside [first_hour, last_hour].
    WattsPerSquareMeter at(Hours h) const {
        if (samples_.empty() || h < first_hour() || h > last_hour())
            return 0.0;
        auto it = std::lower_bound(samples_.begin(), samples_.end(), h,
                                   [](const IrradianceSample& s, Hours x) { return s.hour < x; });
        if (it->hour == h)
            return it->irradiance;
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double t = (h - lo.hour) / (hi.hour - lo.hour);
        return lo.irradiance + t * (hi.irradiance - lo.irradiance);
    }

    IrradianceProfile scaled(double factor) const {
        auto copy = samples_;
        for (auto& s : copy)
            s.irradiance *= factor;
        return IrradianceProfile(std::move(copy));
    }

    friend bool operator==(const IrradianceProfile&, const IrradianceProfile&) = default;

private:
    std::vector<IrradianceSample> samples_;
};

struct PanelSpec {
    Meters length = 1.98;
    Meters width = 0.99;
    int cells = 72;
    double conversion_efficiency = 1.0;

    SquareMeters area() const noexcept { return length * width; }

    void validate() const {
        if (!(length > 0.0) || !(width > 0.0))
            throw DomainError("panel length and width must be > 0");
        if (cells < 1)
            throw DomainError("panel cells must be >= 1");
        if (!(conversion_efficiency > 0.0 && conversion_efficiency <= 1.0))
            throw DomainError("panel conversion_efficiency must be in (0, 1]");
    }

    friend bool operator==(const PanelSpec&, const PanelSpec&) = default;
};

struct ArraySizing {
    SquareMeters required_area = 0.0;
    SquareMeters rounded_area = 0.0;
    std::int64_t panel_count = 0;
    WattHours daily_production = 0.0;

    friend bool operator==(const ArraySizing&, const ArraySizing&) = default;
};

/// Trapezoid integral of the profile over its sampled span, Wh/m^2.
inline WhPerSquareMeter daily_insolation(const IrradianceProfile& profile) {
    if (profile.size() < 2)
        throw DomainError("irradiance profile needs at least 2 samples");
    const auto& s = profile.samples();
    double sum = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i)
        sum += 0.5 * (s[i - 1].irradiance + s[i].irradiance) * (s[i].hour - s[i - 1].hour);
    return sum;
}

/// Integral of the piecewise-linear profile over [from, to] (hours of day).
/// Exact for the interpolant, so hourly steps aligned with hourly samples
/// sum to daily_insolation.
inline WhPerSquareMeter insolation_between(const IrradianceProfile& profile, Hours from, Hours to) {
    if (profile.size() < 2 || !(to > from))
        return 0.0;
    const Hours a = std::max(from, profile.first_hour());
    const Hours b = std::min(to, profile.last_hour());
    if (!(b > a))
        return 0.0;

    const auto& s = profile.samples();
    double sum = 0.0;
    Hours left = a;
    double left_val = profile.at(a);
    for (const auto& sample : s) {
        if (sample.hour <= a)
            continue;
        if (sample.hour >= b)
            break;
        sum += 0.5 * (left_val + sample.irradiance) * (sample.hour - left);
        left = sample.hour;
        left_val = sample.irradiance;
    }
    sum += 0.5 * (left_val + profile.at(b)) * (b - left);
    return sum;
}

/// Highest sample; ties go to the earliest hour.
inline IrradianceSample peak_irradiance(const IrradianceProfile& profile) {
    if (profile.empty())
        throw DomainError("irradiance profile is empty");
    const auto& s = profile.samples();
    return *std::max_element(s.begin(), s.end(), [](const auto& a, const auto& b) {
        return a.irradiance < b.irradiance;
    });
}

inline WattHours array_production(std::int64_t panel_count, const PanelSpec& panel, WhPerSquareMeter insolation) {
    return static_cast<double>(panel_count) * panel.area() * insolation * panel.conversion_efficiency;
}

/// Area needed to collect `target_daily_energy`, rounded up to a multiple of
/// `area_round_up_to`, then covered with whole panels.
inline ArraySizing size_array(WattHours target_daily_energy, WhPerSquareMeter insolation, const PanelSpec& panel,
                              SquareMeters area_round_up_to) {
    panel.validate();
    if (!(target_daily_energy > 0.0))
        throw DomainError("target daily energy must be > 0");
    if (!(insolation > 0.0))
        throw InfeasibleError("cannot size a PV array with zero insolation");
    if (!(area_round_up_to > 0.0))
        throw DomainError("area rounding step must be > 0");

    ArraySizing out;
    out.required_area = target_daily_energy / (insolation * panel.conversion_efficiency);
    out.rounded_area =
        static_cast<double>(detail::ceil_count(out.required_area, area_round_up_to)) * area_round_up_to;
    out.panel_count = detail::ceil_count(out.rounded_area, panel.area());
    out.daily_production = array_production(out.panel_count, panel, insolation);
    return out;
}

/// Renewable production as a percentage of consumption (both in the same unit).
inline double mps(double renewable_production, double total_consumption) {
    if (!(total_consumption > 0.0))
        throw DomainError("MPS needs a positive total consumption");
    return renewable_production / total_consumption * 100.0;
}

/// Signed surplus: positive when production exceeds consumption.
inline double delta_e(double renewable, double consumption) { return renewable - consumption; }

} // namespace solardc
