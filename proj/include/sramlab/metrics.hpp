#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sramlab/pattern.hpp"

namespace sramlab {

/// One device's evaluation window: consecutive read-outs of one epoch.
struct SampleSet {
    std::string device;
    int epoch = 0;
    std::vector<PowerUpPattern> patterns;

    std::size_t count() const { return patterns.size(); }
    std::size_t n() const;

    /// Throws unless count >= 1 and all patterns share one length.
    void validate() const;
};

/// Per-cell empirical probability of reading 1, kept as exact counts so
/// stability can be decided by integer comparison, never by an epsilon.
class OneProbabilityVector {
public:
    OneProbabilityVector(std::vector<std::uint32_t> one_counts, std::uint32_t support);

    std::size_t n() const { return one_counts_.size(); }
    std::uint32_t support() const { return support_; }
    std::uint32_t one_count(std::size_t i) const { return one_counts_[i]; }
    double p(std::size_t i) const {
        return static_cast<double>(one_counts_[i]) / static_cast<double>(support_);
    }
    bool stable(std::size_t i) const {
        return one_counts_[i] == 0 || one_counts_[i] == support_;
    }

private:
    std::vector<std::uint32_t> one_counts_;
    std::uint32_t support_;
};

/// Fractional Hamming distance of every sample against the enrollment
/// reference, in sample order.
std::vector<double> wchd(const PowerUpPattern& reference, const SampleSet& samples);

/// Fractional Hamming distance for every unordered pair of references,
/// ordered (0,1), (0,2), ..., (k-2,k-1). Requires >= 2 references.
std::vector<double> bchd(const std::vector<PowerUpPattern>& references);

/// Per-cell tally of 1s across the window.
OneProbabilityVector one_probability(const SampleSet& samples);

/// Fraction of cells whose 1-count is exactly 0 or exactly support.
double stable_cell_ratio(const OneProbabilityVector& p);

/// (1/n) * sum_i -log2(max(p_i, 1-p_i)); average min-entropy of the
/// power-up noise, in bits per cell.
double noise_min_entropy(const OneProbabilityVector& p);

/// Cross-device min-entropy: p_i estimated over the given references,
/// (1/n) * sum_i -log2(max(p_i_0, p_i_1)). Requires >= 2 references.
double puf_min_entropy(const std::vector<PowerUpPattern>& references);

/// Compound geometric rate per month: (end/start)^(1/months) - 1.
/// start must be > 0 (UndefinedRateError otherwise), months >= 1, end >= 0.
double monthly_change(double start, double end, int months);

} // namespace sramlab
