#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sramlab/encoding.hpp"
#include "sramlab/errors.hpp"
#include "sramlab/metrics.hpp"
#include "sramlab/pattern.hpp"
#include "sramlab/rng.hpp"
#include "sramlab/timeutil.hpp"

using namespace sramlab;

namespace {

PowerUpPattern random_pattern(Rng& rng, std::size_t n) {
    PatternBuilder b(n);
    for (std::size_t i = 0; i < n; ++i) b.set(i, rng.next_bool());
    return std::move(b).build();
}

oracle::Bits to_bits(const PowerUpPattern& p) {
    oracle::Bits out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p.bit(i) ? 1 : 0;
    return out;
}

} // namespace

TEST_CASE("pattern bit order is little-endian within each byte") {
    const auto p = PowerUpPattern::from_bytes({0xAB, 0x2B});
    REQUIRE(p.size() == 16);
    const int expected[16] = {1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 1, 0, 1, 0, 0};
    for (int i = 0; i < 16; ++i) CHECK(p.bit(i) == (expected[i] != 0));
    CHECK(p.to_bytes() == std::vector<std::uint8_t>{0xAB, 0x2B});
}

TEST_CASE("pattern construction rules") {
    CHECK_THROWS_AS(PowerUpPattern(0), LengthMismatchError);
    CHECK_THROWS_AS(PowerUpPattern(12).to_bytes(), LengthMismatchError);
    const auto p = PowerUpPattern::from_bits({1, 0, 1});
    CHECK(p.size() == 3);
    CHECK(p.popcount() == 2);
    // complement stays inside n bits
    CHECK(p.complement().popcount() == 1);
}

TEST_CASE("hamming distance basics") {
    Rng rng(7);
    const auto a = random_pattern(rng, 8192);
    CHECK(hamming_distance(a, a) == 0);
    CHECK(hamming_distance(a, a.complement()) == 8192);
    CHECK_THROWS_AS(hamming_distance(a, PowerUpPattern(64)), LengthMismatchError);

    // word-level implementation vs per-position loop on random 16-bit pairs
    for (int rep = 0; rep < 200; ++rep) {
        const auto x = random_pattern(rng, 16);
        const auto y = random_pattern(rng, 16);
        CHECK(hamming_distance(x, y) == static_cast<std::size_t>(oracle::hd(to_bits(x), to_bits(y))));
        CHECK(hamming_distance(x, y) == hamming_distance(y, x));
    }
}

TEST_CASE("hamming distance triangle inequality") {
    Rng rng(11);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n = 1 + rng.next_below(96);
        const auto a = random_pattern(rng, n);
        const auto b = random_pattern(rng, n);
        const auto c = random_pattern(rng, n);
        CHECK(hamming_distance(a, c) <= hamming_distance(a, b) + hamming_distance(b, c));
    }
}

TEST_CASE("fractional distances and weight") {
    Rng rng(3);
    const auto a = random_pattern(rng, 8192);
    CHECK(fractional_hd(a, a) == 0.0);
    CHECK(fractional_hd(a, a.complement()) == 1.0);

    // 8192-bit pair differing in exactly 204 positions
    PatternBuilder flipped(8192);
    for (std::size_t i = 0; i < 8192; ++i) flipped.set(i, a.bit(i));
    for (std::size_t i = 0; i < 204; ++i) flipped.set(i * 40, !a.bit(i * 40));
    CHECK(fractional_hd(a, std::move(flipped).build()) == 204.0 / 8192.0);

    CHECK(fractional_hw(PowerUpPattern(64)) == 0.0);
    CHECK(fractional_hw(PowerUpPattern(64).complement()) == 1.0);

    PatternBuilder biased(8192);
    for (std::size_t i = 0; i < 5136; ++i) biased.set(i, true);
    CHECK(fractional_hw(std::move(biased).build()) == 5136.0 / 8192.0);

    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 1 + rng.next_below(200);
        const auto p = random_pattern(rng, n);
        CHECK(fractional_hw(p) + fractional_hw(p.complement()) == 1.0);
    }
}

TEST_CASE("word-level metrics equal loop oracle on random small instances") {
    Rng rng(2024);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n = 1 + rng.next_below(64);
        const auto a = random_pattern(rng, n);
        const auto b = random_pattern(rng, n);
        CHECK(hamming_distance(a, b) == static_cast<std::size_t>(oracle::hd(to_bits(a), to_bits(b))));
        CHECK(fractional_hw(a) == doctest::Approx(oracle::fhw(to_bits(a))).epsilon(1e-15));
    }
}

TEST_CASE("base64 and hex codecs") {
    CHECK(to_base64({0xAB, 0x2B}) == "qys=");
    CHECK(from_base64("qys=") == std::vector<std::uint8_t>{0xAB, 0x2B});
    CHECK(to_hex({0xAB, 0x2B}) == "ab2b");
    CHECK(from_hex("AB2B") == std::vector<std::uint8_t>{0xAB, 0x2B});
    CHECK(from_base64("") == std::vector<std::uint8_t>{});
    CHECK_THROWS_AS(from_base64("a"), ParseError);
    CHECK_THROWS_AS(from_base64("ab=c"), ParseError);
    CHECK_THROWS_AS(from_base64("a!cd"), ParseError);
    CHECK_THROWS_AS(from_hex("abc"), ParseError);
    CHECK_THROWS_AS(from_hex("zz"), ParseError);

    Rng rng(99);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<std::uint8_t> bytes(rng.next_below(64));
        for (auto& v : bytes) v = static_cast<std::uint8_t>(rng.next_u64());
        CHECK(from_base64(to_base64(bytes)) == bytes);
        CHECK(from_hex(to_hex(bytes)) == bytes);
    }
}

TEST_CASE("wchd examples") {
    const auto ref = PowerUpPattern::from_bits({1, 0, 1, 0, 1, 0, 1, 0});
    SampleSet s{"dev", 0,
                {PowerUpPattern::from_bits({1, 0, 1, 0, 1, 0, 1, 0}),
                 PowerUpPattern::from_bits({0, 0, 1, 0, 1, 0, 1, 1}),
                 PowerUpPattern::from_bits({1, 1, 1, 1, 1, 1, 1, 1})}};
    const auto got = wchd(ref, s);
    REQUIRE(got.size() == 3);
    CHECK(got[0] == 0.0);
    CHECK(got[1] == 2.0 / 8.0);
    CHECK(got[2] == 4.0 / 8.0);

    SampleSet same{"dev", 0, {ref, ref}};
    for (double v : wchd(ref, same)) CHECK(v == 0.0);

    SampleSet bad{"dev", 0, {PowerUpPattern(16)}};
    CHECK_THROWS_AS(wchd(ref, bad), LengthMismatchError);
}

TEST_CASE("bchd examples") {
    const auto a = PowerUpPattern::from_bits({1, 0, 1, 0});
    CHECK(bchd({a, a}) == std::vector<double>{0.0});
    CHECK_THROWS_AS(bchd({a}), LengthMismatchError);

    const auto b = PowerUpPattern::from_bits({1, 1, 1, 1});
    const auto c = PowerUpPattern::from_bits({0, 0, 0, 0});
    const auto got = bchd({a, b, c});
    const auto want = oracle::bchd({to_bits(a), to_bits(b), to_bits(c)});
    REQUIRE(got.size() == 3); // C(3,2)
    for (std::size_t i = 0; i < 3; ++i) CHECK(got[i] == want[i]);
}

TEST_CASE("one_probability examples") {
    SampleSet hand{"dev", 0,
                   {PowerUpPattern::from_bits({1, 0, 0, 1, 1, 0, 1, 0}),
                    PowerUpPattern::from_bits({1, 0, 1, 1, 0, 0, 1, 0}),
                    PowerUpPattern::from_bits({1, 0, 0, 0, 1, 0, 1, 1}),
                    PowerUpPattern::from_bits({1, 0, 0, 1, 1, 0, 0, 0}),
                    PowerUpPattern::from_bits({0, 0, 0, 1, 1, 0, 1, 0})}};
    const auto p = one_probability(hand);
    std::vector<oracle::Bits> bits;
    for (const auto& s : hand.patterns) bits.push_back(to_bits(s));
    const auto counts = oracle::one_counts(bits);
    REQUIRE(p.n() == 8);
    CHECK(p.support() == 5);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(p.p(i) == static_cast<double>(counts[i]) / 5.0);

    // alternating complementary patterns: every p exactly 0.5
    const auto x = PowerUpPattern::from_bits({1, 0, 1, 1, 0, 0, 1, 0});
    SampleSet alt{"dev", 0, {}};
    for (int i = 0; i < 500; ++i) {
        alt.patterns.push_back(x);
        alt.patterns.push_back(x.complement());
    }
    const auto palt = one_probability(alt);
    CHECK(palt.support() == 1000);
    for (std::size_t i = 0; i < 8; ++i) CHECK(palt.p(i) == 0.5);

    // identical samples: every p in {0,1}
    SampleSet same{"dev", 0, {x, x, x}};
    const auto psame = one_probability(same);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK((psame.p(i) == 0.0 || psame.p(i) == 1.0));

    SampleSet empty{"dev", 0, {}};
    CHECK_THROWS_AS(one_probability(empty), LengthMismatchError);
}

TEST_CASE("stable_cell_ratio uses exact counts") {
    // p = [0, 0.5, 1, 0.002] with support 1000 -> 2 of 4 stable
    OneProbabilityVector p({0, 500, 1000, 2}, 1000);
    CHECK(stable_cell_ratio(p) == 0.5);
    CHECK(p.stable(0));
    CHECK(!p.stable(3)); // 0.002 is not stable even though it is "close"
}

TEST_CASE("noise_min_entropy closed-form values") {
    CHECK(noise_min_entropy(OneProbabilityVector({0, 1000, 0}, 1000)) == 0.0);
    CHECK(noise_min_entropy(OneProbabilityVector({500, 500}, 1000)) == 1.0);
    // p = [0.75] -> -log2(0.75)
    CHECK(noise_min_entropy(OneProbabilityVector({3}, 4)) ==
          doctest::Approx(0.41503749927884382).epsilon(1e-14));
}

TEST_CASE("puf_min_entropy examples") {
    const auto a = PowerUpPattern::from_bits({1, 0, 1, 0, 1, 1});
    CHECK(puf_min_entropy({a, a, a}) == 0.0);
    // at each position exactly half the devices read 1
    const auto b = a.complement();
    CHECK(puf_min_entropy({a, b, a, b}) == 1.0);
    CHECK_THROWS_AS(puf_min_entropy({a}), LengthMismatchError);
}

TEST_CASE("metrics equal brute-force oracle on random instances") {
    Rng rng(77);
    for (int rep = 0; rep < 400; ++rep) {
        const std::size_t n = 1 + rng.next_below(64);
        const std::size_t count = 1 + rng.next_below(50);
        const std::size_t devices = 2 + rng.next_below(4);

        SampleSet samples{"d0", 0, {}};
        std::vector<oracle::Bits> bits;
        for (std::size_t i = 0; i < count; ++i) {
            samples.patterns.push_back(random_pattern(rng, n));
            bits.push_back(to_bits(samples.patterns.back()));
        }
        const auto ref = random_pattern(rng, n);

        const auto w = wchd(ref, samples);
        const auto worac = oracle::wchd(to_bits(ref), bits);
        for (std::size_t i = 0; i < count; ++i) CHECK(w[i] == worac[i]);

        const auto p = one_probability(samples);
        CHECK(stable_cell_ratio(p) == doctest::Approx(oracle::stable_ratio(bits)).epsilon(1e-15));
        CHECK(noise_min_entropy(p) ==
              doctest::Approx(oracle::noise_min_entropy(bits)).epsilon(1e-12));
        CHECK(noise_min_entropy(p) >= 0.0);
        CHECK(noise_min_entropy(p) <= 1.0);
        // stable ratio 1 iff zero noise entropy
        CHECK((stable_cell_ratio(p) == 1.0) == (noise_min_entropy(p) == 0.0));

        std::vector<PowerUpPattern> refs;
        std::vector<oracle::Bits> refbits;
        for (std::size_t d = 0; d < devices; ++d) {
            refs.push_back(random_pattern(rng, n));
            refbits.push_back(to_bits(refs.back()));
        }
        const auto bc = bchd(refs);
        const auto bcorac = oracle::bchd(refbits);
        REQUIRE(bc.size() == devices * (devices - 1) / 2);
        for (std::size_t i = 0; i < bc.size(); ++i) CHECK(bc[i] == bcorac[i]);
        CHECK(puf_min_entropy(refs) ==
              doctest::Approx(oracle::puf_min_entropy(refbits)).epsilon(1e-12));
        CHECK(puf_min_entropy(refs) >= 0.0);
        CHECK(puf_min_entropy(refs) <= 1.0);
    }
}

TEST_CASE("monthly_change reproduces the published change rates") {
    // frozen with an independent high-precision calculator
    CHECK(monthly_change(0.0249, 0.0297, 24) ==
          doctest::Approx(0.0073720088745675611).epsilon(1e-12));
    CHECK(monthly_change(0.0305, 0.0364, 24) ==
          doctest::Approx(0.0073956340689660401).epsilon(1e-12));
    CHECK(monthly_change(0.0273, 0.0329, 24) ==
          doctest::Approx(0.0078047140474165539).epsilon(1e-12));
    CHECK(monthly_change(0.859, 0.837, 24) ==
          doctest::Approx(-0.0010804513705953734).epsilon(1e-12));
    CHECK(monthly_change(0.4431, 0.4467, 24) ==
          doctest::Approx(0.0003372130999183582).epsilon(1e-12));
    CHECK(monthly_change(0.5, 0.5, 24) == 0.0);
    CHECK_THROWS_AS(monthly_change(0.0, 0.1, 24), UndefinedRateError);
    CHECK_THROWS_AS(monthly_change(0.1, 0.1, 0), UndefinedRateError);
}

TEST_CASE("monthly_change inverts compound growth") {
    Rng rng(5);
    for (int rep = 0; rep < 500; ++rep) {
        const double r = -0.5 + rng.next_double();        // (-0.5, 0.5)
        const double x = 1e-6 + rng.next_double();        // start
        const int m = 1 + static_cast<int>(rng.next_below(60));
        const double end = x * std::pow(1.0 + r, m);
        CHECK(monthly_change(x, end, m) == doctest::Approx(r).epsilon(1e-12));
    }
}

TEST_CASE("iso8601 timestamps") {
    const CivilDate start{2017, 2, 8};
    const InstantMs t0 = civil_to_ms(start);
    CHECK(format_iso8601(t0) == "2017-02-08T00:00:00.000Z");
    CHECK(format_iso8601(t0 + 5400) == "2017-02-08T00:00:05.400Z");
    CHECK(parse_iso8601("2017-02-08T00:00:05.400Z") == t0 + 5400);
    CHECK(parse_iso8601("2017-02-08T00:00:05Z") == t0 + 5000);
    CHECK_THROWS_AS(parse_iso8601("2017-02-08 00:00:05Z"), ParseError);
    CHECK_THROWS_AS(parse_iso8601("2017-02-08T00:00:05+01:00"), ParseError);

    const CivilDate end = add_months(start, 24);
    CHECK(end.year == 2019);
    CHECK(end.month == 2);
    CHECK(end.day == 8);
    const CivilDate wrap = add_months({2017, 11, 8}, 3);
    CHECK(wrap.year == 2018);
    CHECK(wrap.month == 2);

    CHECK(parse_civil_date("2017-02-08").year == 2017);
    CHECK_THROWS_AS(parse_civil_date("2017/02/08"), ParseError);
    // leap day formats correctly
    CHECK(format_iso8601(civil_to_ms({2016, 2, 29})) == "2016-02-29T00:00:00.000Z");
}

TEST_CASE("rng streams are deterministic and distinct") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    bool differs = false;
    Rng a2(42);
    for (int i = 0; i < 100; ++i) differs |= (a2.next_u64() != c.next_u64());
    CHECK(differs);

    Rng s0 = Rng::stream(1, 0), s1 = Rng::stream(1, 1);
    bool stream_differs = false;
    for (int i = 0; i < 100; ++i) stream_differs |= (s0.next_u64() != s1.next_u64());
    CHECK(stream_differs);
}

TEST_CASE("gaussian sampler moments") {
    Rng rng(12345);
    const int n = 200000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.next_gaussian();
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}
