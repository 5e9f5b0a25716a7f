#pragma once

#include <cstdint>
#include <vector>

#include "sramlab/errors.hpp"

namespace sramlab {

/// One SRAM power-up read-out: an immutable bit string of fixed length n.
///
/// Bit order is little-endian within each byte of the serialized form:
/// bit i lives in byte i/8 at position i%8. Internally bits are packed
/// into 64-bit words (bit i -> word i/64, lane i%64), which serializes
/// to exactly that byte convention on a little-endian word dump.
/// Trailing lanes beyond n are always zero.
class PowerUpPattern {
public:
    /// All-zero pattern of n bits.
    explicit PowerUpPattern(std::size_t n);

    /// From one value per cell (anything nonzero reads as 1).
    static PowerUpPattern from_bits(const std::vector<int>& bits);

    /// From serialized bytes; n must equal bytes.size()*8 unless given.
    static PowerUpPattern from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t n = 0);

    std::size_t size() const { return n_; }
    bool bit(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    std::size_t popcount() const;
    PowerUpPattern complement() const;

    /// Serialized form (n/8 bytes). Requires n % 8 == 0.
    std::vector<std::uint8_t> to_bytes() const;

    const std::vector<std::uint64_t>& words() const { return words_; }

    bool operator==(const PowerUpPattern& other) const {
        return n_ == other.n_ && words_ == other.words_;
    }

private:
    friend class PatternBuilder;
    PowerUpPattern(std::size_t n, std::vector<std::uint64_t> words)
        : n_(n), words_(std::move(words)) {}

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Write-once builder so the simulator can assemble a pattern bit by bit
/// without ever exposing a mutable PowerUpPattern.
class PatternBuilder {
public:
    explicit PatternBuilder(std::size_t n);

    void set(std::size_t i, bool value) {
        if (value)
            words_[i >> 6] |= (1ULL << (i & 63));
        else
            words_[i >> 6] &= ~(1ULL << (i & 63));
    }

    PowerUpPattern build() &&;

private:
    std::size_t n_;
    std::vector<std::uint64_t> words_;
};

/// Number of positions where a and b disagree. Rejects length mismatch.
std::size_t hamming_distance(const PowerUpPattern& a, const PowerUpPattern& b);

/// hamming_distance(a, b) / n.
double fractional_hd(const PowerUpPattern& a, const PowerUpPattern& b);

/// Fraction of 1-bits.
double fractional_hw(const PowerUpPattern& a);

} // namespace sramlab
