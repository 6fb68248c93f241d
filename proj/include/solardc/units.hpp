#pragma once

#include <cmath>
#include <cstdint>

namespace solardc {

using Watts = double;      ///< power, W
using WattHours = double;  ///< energy, Wh
using Hours = double;      ///< duration or hour-of-day, h
using Meters = double;
using SquareMeters = double;
using WhPerSquareMeter = double;
using WattsPerSquareMeter = double;

namespace detail {

/// Smallest n >= 0 with n * unit >= amount. Computed by division and then
/// corrected so the result agrees with the multiplicative definition even
/// when the quotient lands one ulp off an integer.
inline std::int64_t ceil_count(double amount, double unit) {
    if (amount <= 0.0)
        return 0;
    auto n = static_cast<std::int64_t>(std::ceil(amount / unit));
    while (static_cast<double>(n) * unit < amount)
        ++n;
    while (n > 0 && static_cast<double>(n - 1) * unit >= amount)
        --n;
    return n;
}

} // namespace detail
} // namespace solardc
