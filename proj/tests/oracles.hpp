#pragma once

// Naive per-bit reference implementations used only by tests. They stay
// deliberately independent of the library's word-level code paths: plain
// int vectors, position-by-position loops, direct formulas.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

using Bits = std::vector<int>;

inline int hd(const Bits& a, const Bits& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

inline double fhd(const Bits& a, const Bits& b) {
    return static_cast<double>(hd(a, b)) / static_cast<double>(a.size());
}

inline double fhw(const Bits& a) {
    int ones = 0;
    for (int v : a) ones += v;
    return static_cast<double>(ones) / static_cast<double>(a.size());
}

inline std::vector<double> wchd(const Bits& ref, const std::vector<Bits>& samples) {
    std::vector<double> out;
    for (const auto& s : samples) out.push_back(fhd(ref, s));
    return out;
}

inline std::vector<double> bchd(const std::vector<Bits>& refs) {
    std::vector<double> out;
    for (std::size_t i = 0; i < refs.size(); ++i)
        for (std::size_t j = i + 1; j < refs.size(); ++j)
            out.push_back(fhd(refs[i], refs[j]));
    return out;
}

inline std::vector<int> one_counts(const std::vector<Bits>& samples) {
    std::vector<int> counts(samples.front().size(), 0);
    for (const auto& s : samples)
        for (std::size_t i = 0; i < s.size(); ++i) counts[i] += s[i];
    return counts;
}

inline double stable_ratio(const std::vector<Bits>& samples) {
    const auto counts = one_counts(samples);
    const int support = static_cast<int>(samples.size());
    int stable = 0;
    for (int c : counts)
        if (c == 0 || c == support) ++stable;
    return static_cast<double>(stable) / static_cast<double>(counts.size());
}

inline double noise_min_entropy(const std::vector<Bits>& samples) {
    const auto counts = one_counts(samples);
    const double support = static_cast<double>(samples.size());
    double sum = 0.0;
    for (int c : counts) {
        const double p = c / support;
        const double majority = p >= 0.5 ? p : 1.0 - p;
        if (majority < 1.0) sum += -std::log2(majority);
    }
    return sum / static_cast<double>(counts.size());
}

inline double puf_min_entropy(const std::vector<Bits>& refs) {
    const std::size_t n = refs.front().size();
    const double k = static_cast<double>(refs.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        int ones = 0;
        for (const auto& r : refs) ones += r[i];
        const double p1 = ones / k;
        const double majority = p1 >= 0.5 ? p1 : 1.0 - p1;
        if (majority < 1.0) sum += -std::log2(majority);
    }
    return sum / static_cast<double>(n);
}

} // namespace oracle
