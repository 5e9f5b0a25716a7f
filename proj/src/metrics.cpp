#include "sramlab/metrics.hpp"

#include <bit>
#include <cmath>

namespace sramlab {

std::size_t SampleSet::n() const {
    return patterns.empty() ? 0 : patterns.front().size();
}

void SampleSet::validate() const {
    if (patterns.empty())
        throw LengthMismatchError("sample set for device '" + device + "' is empty");
    const std::size_t len = patterns.front().size();
    for (const auto& p : patterns)
        if (p.size() != len)
            throw LengthMismatchError("sample set for device '" + device +
                                      "' mixes pattern lengths");
}

OneProbabilityVector::OneProbabilityVector(std::vector<std::uint32_t> one_counts,
                                           std::uint32_t support)
    : one_counts_(std::move(one_counts)), support_(support) {
    if (support_ == 0) throw LengthMismatchError("one-probability support must be >= 1");
    for (std::uint32_t c : one_counts_)
        if (c > support_)
            throw LengthMismatchError("one-count exceeds support");
}

std::vector<double> wchd(const PowerUpPattern& reference, const SampleSet& samples) {
    samples.validate();
    std::vector<double> out;
    out.reserve(samples.count());
    for (const auto& s : samples.patterns) out.push_back(fractional_hd(reference, s));
    return out;
}

std::vector<double> bchd(const std::vector<PowerUpPattern>& references) {
    if (references.size() < 2)
        throw LengthMismatchError("between-class distance needs at least 2 references");
    std::vector<double> out;
    out.reserve(references.size() * (references.size() - 1) / 2);
    for (std::size_t i = 0; i < references.size(); ++i)
        for (std::size_t j = i + 1; j < references.size(); ++j)
            out.push_back(fractional_hd(references[i], references[j]));
    return out;
}

OneProbabilityVector one_probability(const SampleSet& samples) {
    samples.validate();
    const std::size_t n = samples.n();
    std::vector<std::uint32_t> counts(n, 0);
    for (const auto& pat : samples.patterns) {
        const auto& words = pat.words();
        for (std::size_t w = 0; w < words.size(); ++w) {
            std::uint64_t bits = words[w];
            while (bits) {
                const int lane = std::countr_zero(bits);
                counts[(w << 6) + static_cast<std::size_t>(lane)]++;
                bits &= bits - 1;
            }
        }
    }
    return OneProbabilityVector(std::move(counts), static_cast<std::uint32_t>(samples.count()));
}

double stable_cell_ratio(const OneProbabilityVector& p) {
    std::size_t stable = 0;
    for (std::size_t i = 0; i < p.n(); ++i)
        if (p.stable(i)) ++stable;
    return static_cast<double>(stable) / static_cast<double>(p.n());
}

double noise_min_entropy(const OneProbabilityVector& p) {
    const double support = p.support();
    double sum = 0.0;
    for (std::size_t i = 0; i < p.n(); ++i) {
        const std::uint32_t c = p.one_count(i);
        const std::uint32_t majority = std::max(c, p.support() - c);
        // stable cells contribute exactly 0
        if (majority != p.support())
            sum -= std::log2(static_cast<double>(majority) / support);
    }
    return sum / static_cast<double>(p.n());
}

double puf_min_entropy(const std::vector<PowerUpPattern>& references) {
    if (references.size() < 2)
        throw LengthMismatchError("PUF entropy needs at least 2 references");
    const std::size_t n = references.front().size();
    for (const auto& r : references)
        if (r.size() != n) throw LengthMismatchError("PUF entropy over unequal lengths");

    const double k = static_cast<double>(references.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t ones = 0;
        for (const auto& r : references) ones += r.bit(i) ? 1 : 0;
        const std::size_t majority = std::max(ones, references.size() - ones);
        if (majority != references.size())
            sum -= std::log2(static_cast<double>(majority) / k);
    }
    return sum / static_cast<double>(n);
}

double monthly_change(double start, double end, int months) {
    if (start <= 0.0)
        throw UndefinedRateError("monthly change undefined for start value 0");
    if (end < 0.0)
        throw UndefinedRateError("monthly change undefined for negative end value");
    if (months < 1)
        throw UndefinedRateError("monthly change needs at least 1 month");
    return std::pow(end / start, 1.0 / static_cast<double>(months)) - 1.0;
}

} // namespace sramlab
