#pragma once

#include <cmath>

namespace sramlab {

/// Standard normal CDF.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

/// Inverse of normal_cdf via bisection + Newton polish; |error| < 1e-13
/// over p in (1e-300, 1-1e-16).
double normal_quantile(double p);

} // namespace sramlab
