#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <random>
#include <vector>

#include "chaosteg/stego.hpp"

#include "test_util.hpp"

using namespace chaosteg;

namespace {

// Independent reference embedder: expand the payload to a flat bit
// vector (MSB-first), walk the samples, and rewrite the k low bits of
// each via plain arithmetic. Checks the production bit twiddling.
ImageBuffer oracle_embed(const ImageBuffer& cover,
                         const std::vector<std::uint8_t>& payload,
                         const BitPlan& plan) {
    std::vector<int> bits;
    for (std::uint8_t byte : payload)
        for (int b = 7; b >= 0; --b)
            bits.push_back((byte >> b) & 1);

    ImageBuffer out = cover;
    std::size_t next = 0;
    for (std::size_t i = 0; i < out.samples.size() && next < bits.size(); ++i) {
        const int k = plan.bits[i % out.channels];
        int value = out.samples[i];
        for (int pos = k - 1; pos >= 0 && next < bits.size(); --pos) {
            const int weight = 1 << pos;
            const int old_bit = (value / weight) % 2;
            value += (bits[next++] - old_bit) * weight;
        }
        out.samples[i] = std::uint8_t(value);
    }
    return out;
}

std::vector<std::uint8_t> oracle_extract(const ImageBuffer& stego,
                                         std::size_t n_bytes, const BitPlan& plan) {
    std::vector<int> bits;
    const std::size_t want = n_bytes * 8;
    for (std::size_t i = 0; i < stego.samples.size() && bits.size() < want; ++i) {
        const int k = plan.bits[i % stego.channels];
        for (int pos = k - 1; pos >= 0 && bits.size() < want; --pos)
            bits.push_back((stego.samples[i] >> pos) & 1);
    }
    std::vector<std::uint8_t> out(n_bytes, 0);
    for (std::size_t i = 0; i < want; ++i)
        out[i / 8] = std::uint8_t(out[i / 8] << 1 | bits[i]);
    return out;
}

} // namespace

TEST_CASE("bit plan presets and validation", "[stego]") {
    const BitPlan p3 = BitPlan::preset(3, 3);
    CHECK(p3.bits == std::array<std::uint8_t, 3>{1, 1, 1});
    const BitPlan p6 = BitPlan::preset(6, 3);
    CHECK(p6.bits == std::array<std::uint8_t, 3>{2, 2, 2});
    const BitPlan p8 = BitPlan::preset(8, 3);
    CHECK(p8.bits == std::array<std::uint8_t, 3>{4, 2, 2});
    CHECK(p8.sum() == 8);
    CHECK(p8.max_bits() == 4);

    const BitPlan g5 = BitPlan::preset(5, 1);
    CHECK(g5.channels == 1);
    CHECK(g5.bits[0] == 5);

    CHECK_THROWS_AS(BitPlan::preset(7, 3), Error);
    CHECK_THROWS_AS(BitPlan::preset(9, 1), Error);
    CHECK_THROWS_AS(BitPlan::rgb(9, 0, 0), Error);
    CHECK_THROWS_AS(BitPlan::rgb(0, 0, 0), Error);
    CHECK_NOTHROW(BitPlan::rgb(8, 8, 8));
}

TEST_CASE("capacity arithmetic", "[stego]") {
    const ImageBuffer cover(512, 512, 3);
    CHECK(capacity_bits(cover, BitPlan::rgb(1, 1, 1)) == 786432);
    CHECK(capacity_bits(cover, BitPlan::rgb(4, 2, 2)) == 2097152);

    // a 256x256 grayscale secret is 524288 bits: fits at 3 bpp
    const std::uint64_t secret_bits = 256ull * 256 * 8;
    CHECK(secret_bits == 524288);
    CHECK(secret_bits <= capacity_bits(cover, BitPlan::rgb(1, 1, 1)));

    CHECK_THROWS_AS(capacity_bits(cover, BitPlan::gray(3)), ChannelMismatchError);
}

TEST_CASE("embed_bits_in_byte", "[stego]") {
    CHECK(embed_bits_in_byte(0b10110100, 0b1, 1) == 0b10110101);
    CHECK(embed_bits_in_byte(0b10110100, 0b10, 2) == 0b10110110);
    CHECK(embed_bits_in_byte(0b10110100, 0b111, 0) == 0b10110100); // k=0 identity
    CHECK(embed_bits_in_byte(0xFF, 0x00, 8) == 0x00);
    CHECK(embed_bits_in_byte(0b10110100, 0b00, 2) == 0b10110100);  // matching bits
}

TEST_CASE("hand-traced 1x1 RGB embed at (4,2,2)", "[stego]") {
    const ImageBuffer cover(1, 1, 3, {0, 0, 0});
    const ImageBuffer stego = embed(cover, {0xFF}, BitPlan::rgb(4, 2, 2));
    CHECK(stego.samples == std::vector<std::uint8_t>{15, 3, 3});
    CHECK(stego == oracle_embed(cover, {0xFF}, BitPlan::rgb(4, 2, 2)));
}

TEST_CASE("embed matches the brute-force oracle", "[stego]") {
    std::mt19937_64 rng(1234);
    const std::vector<BitPlan> plans = {
        BitPlan::rgb(1, 1, 1), BitPlan::rgb(2, 2, 2), BitPlan::rgb(4, 2, 2),
        BitPlan::rgb(0, 3, 5), BitPlan::rgb(8, 8, 8)};
    for (int trial = 0; trial < 24; ++trial) {
        const BitPlan& plan = plans[trial % plans.size()];
        const int w = 1 + int(rng() % 12);
        const int h = 1 + int(rng() % 12);
        const ImageBuffer cover = testutil::make_random_image(w, h, 3, rng());
        const std::uint64_t cap = capacity_bits(cover, plan);
        const std::size_t n = std::size_t(rng() % (cap / 8 + 1));
        const auto payload = testutil::random_bytes(n, rng());

        const ImageBuffer ours = embed(cover, payload, plan);
        CHECK(ours == oracle_embed(cover, payload, plan));
        CHECK(extract(ours, n, plan) == payload);
    }
}

TEST_CASE("gray covers embed through a single-channel plan", "[stego]") {
    std::mt19937_64 rng(777);
    for (int k = 1; k <= 8; ++k) {
        const BitPlan plan = BitPlan::gray(k);
        const ImageBuffer cover = testutil::make_random_image(16, 16, 1, rng());
        const std::size_t n = capacity_bits(cover, plan) / 8;
        const auto payload = testutil::random_bytes(n, rng());
        const ImageBuffer stego = embed(cover, payload, plan);
        CHECK(stego == oracle_embed(cover, payload, plan));
        CHECK(extract(stego, n, plan) == payload);
    }
}

TEST_CASE("payload equal to the cover's own low bits leaves it unchanged", "[stego]") {
    const BitPlan plan = BitPlan::rgb(2, 1, 3);
    const ImageBuffer cover = testutil::make_random_image(9, 4, 3, 55);
    const std::size_t n = capacity_bits(cover, plan) / 8;
    const auto current = oracle_extract(cover, n, plan);
    const ImageBuffer stego = embed(cover, current, plan);
    CHECK(stego == cover);
}

TEST_CASE("samples beyond the payload stay untouched, distortion bounded", "[stego]") {
    const BitPlan plan = BitPlan::rgb(4, 2, 2);
    const ImageBuffer cover = testutil::make_random_image(32, 32, 3, 66);
    const std::size_t n = 100; // fills 100 pixels of 1024
    const auto payload = testutil::random_bytes(n, 8181);
    const ImageBuffer stego = embed(cover, payload, plan);

    std::size_t consumed_samples = 0;
    std::size_t bits_left = n * 8;
    while (bits_left > 0) {
        const int k = plan.bits[consumed_samples % 3];
        bits_left -= std::min<std::size_t>(bits_left, std::size_t(k));
        ++consumed_samples;
    }
    for (std::size_t i = 0; i < cover.samples.size(); ++i) {
        const int k = plan.bits[i % 3];
        const int diff = std::abs(int(stego.samples[i]) - int(cover.samples[i]));
        CHECK(diff <= (1 << k) - 1);
        if (i >= consumed_samples)
            CHECK(stego.samples[i] == cover.samples[i]);
    }
}

TEST_CASE("partial tail group lands in the top bit positions", "[stego]") {
    // gray k=3, one payload byte = 8 bits: 3 + 3 + 2; the third sample
    // keeps its lowest bit
    const ImageBuffer cover(3, 1, 1, {0xFF, 0xFF, 0xFF});
    const ImageBuffer stego = embed(cover, {0x00}, BitPlan::gray(3));
    CHECK(stego.samples == std::vector<std::uint8_t>{0xF8, 0xF8, 0xF9});
    CHECK(extract(stego, 1, BitPlan::gray(3)) == std::vector<std::uint8_t>{0x00});
    CHECK(stego == oracle_embed(cover, {0x00}, BitPlan::gray(3)));
}

TEST_CASE("capacity exceeded reports needed vs available", "[stego]") {
    const ImageBuffer cover(4, 4, 3);
    const BitPlan plan = BitPlan::rgb(1, 1, 1); // 48 bits
    try {
        embed(cover, testutil::random_bytes(7, 1), plan);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(e.needed_bits() == 56);
        CHECK(e.available_bits() == 48);
    }
    CHECK_THROWS_AS(extract(cover, 7, plan), CapacityError);
    CHECK_NOTHROW(embed(cover, testutil::random_bytes(6, 1), plan));
}

TEST_CASE("extract edge cases", "[stego]") {
    const ImageBuffer cover = testutil::make_random_image(4, 4, 3, 2);
    const BitPlan plan = BitPlan::rgb(1, 1, 1);
    CHECK(extract(cover, 0, plan).empty());
    // reading an unmodified cover returns its own LSB pattern
    CHECK(extract(cover, 4, plan) == oracle_extract(cover, 4, plan));
}

TEST_CASE("per-sample MSE of k-bit replacement matches (4^k - 1)/6", "[stego]") {
    for (const int k : {1, 2, 4}) {
        // closed form, confirmed by brute force over all (old,new) pairs
        double brute = 0.0;
        const int levels = 1 << k;
        for (int oldv = 0; oldv < levels; ++oldv)
            for (int newv = 0; newv < levels; ++newv)
                brute += double((oldv - newv) * (oldv - newv));
        brute /= double(levels) * double(levels);
        const double analytic = (std::pow(2.0, 2 * k) - 1.0) / 6.0;
        CHECK_THAT(brute, Catch::Matchers::WithinAbs(analytic, 1e-9));

        // empirical: 1e6 uniform cover samples, uniform payload
        const int w = 1000, h = 1000;
        const ImageBuffer cover = testutil::make_random_image(w, h, 1, 900 + k);
        const BitPlan plan = BitPlan::gray(k);
        const std::size_t n = std::size_t(w) * h * k / 8;
        const auto payload = testutil::random_bytes(n, 901 + k);
        const ImageBuffer stego = embed(cover, payload, plan);
        double sum = 0.0;
        for (std::size_t i = 0; i < cover.samples.size(); ++i) {
            const double d = double(cover.samples[i]) - double(stego.samples[i]);
            sum += d * d;
        }
        const double empirical = sum / double(cover.samples.size());
        CHECK(empirical > analytic * 0.98);
        CHECK(empirical < analytic * 1.02);
    }
}
