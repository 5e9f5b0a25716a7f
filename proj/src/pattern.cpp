#include "sramlab/pattern.hpp"

#include <bit>

namespace sramlab {

namespace {

std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

// mask covering the valid lanes of the last word
std::uint64_t tail_mask(std::size_t n) {
    const std::size_t rem = n & 63;
    return rem ? ((1ULL << rem) - 1) : ~0ULL;
}

} // namespace

PowerUpPattern::PowerUpPattern(std::size_t n) : n_(n), words_(word_count(n), 0) {
    if (n == 0) throw LengthMismatchError("pattern length must be positive");
}

PowerUpPattern PowerUpPattern::from_bits(const std::vector<int>& bits) {
    PatternBuilder b(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) b.set(i, bits[i] != 0);
    return std::move(b).build();
}

PowerUpPattern PowerUpPattern::from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t n) {
    if (n == 0) n = bytes.size() * 8;
    if (bytes.size() * 8 != n)
        throw LengthMismatchError("byte buffer holds " + std::to_string(bytes.size() * 8) +
                                  " bits, expected " + std::to_string(n));
    PowerUpPattern p(n);
    for (std::size_t i = 0; i < bytes.size(); ++i)
        p.words_[i >> 3] |= static_cast<std::uint64_t>(bytes[i]) << ((i & 7) * 8);
    return p;
}

std::size_t PowerUpPattern::popcount() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

PowerUpPattern PowerUpPattern::complement() const {
    PowerUpPattern out(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    out.words_.back() &= tail_mask(n_);
    return out;
}

std::vector<std::uint8_t> PowerUpPattern::to_bytes() const {
    if (n_ % 8 != 0)
        throw LengthMismatchError("cannot serialize a pattern of " + std::to_string(n_) +
                                  " bits; length must be a multiple of 8");
    std::vector<std::uint8_t> out(n_ / 8);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(words_[i >> 3] >> ((i & 7) * 8));
    return out;
}

PatternBuilder::PatternBuilder(std::size_t n) : n_(n), words_(word_count(n), 0) {
    if (n == 0) throw LengthMismatchError("pattern length must be positive");
}

PowerUpPattern PatternBuilder::build() && {
    words_.back() &= tail_mask(n_);
    return PowerUpPattern(n_, std::move(words_));
}

std::size_t hamming_distance(const PowerUpPattern& a, const PowerUpPattern& b) {
    if (a.size() != b.size())
        throw LengthMismatchError("hamming distance over unequal lengths: " +
                                  std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    const auto& wa = a.words();
    const auto& wb = b.words();
    std::size_t c = 0;
    for (std::size_t i = 0; i < wa.size(); ++i)
        c += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
    return c;
}

double fractional_hd(const PowerUpPattern& a, const PowerUpPattern& b) {
    return static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.size());
}

double fractional_hw(const PowerUpPattern& a) {
    return static_cast<double>(a.popcount()) / static_cast<double>(a.size());
}

} // namespace sramlab
