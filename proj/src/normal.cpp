#include "sramlab/normal.hpp"

#include <limits>

#include "sramlab/errors.hpp"

namespace sramlab {

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw Error("normal quantile domain is (0,1)");
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < p ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    // Newton polish; pdf is well away from 0 for any representable quantile
    for (int i = 0; i < 4; ++i) {
        const double pdf = 0.3989422804014326779 * std::exp(-0.5 * x * x);
        if (pdf < std::numeric_limits<double>::min()) break;
        x -= (normal_cdf(x) - p) / pdf;
    }
    return x;
}

} // namespace sramlab
