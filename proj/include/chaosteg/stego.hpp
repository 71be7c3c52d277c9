#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "chaosteg/errors.hpp"
#include "chaosteg/image.hpp"
#include "chaosteg/kvfile.hpp"

// LSB-replacement embedding at a configurable per-channel bit rate.
// Traversal is row-major over pixels, channels in R,G,B order; payload
// bits are consumed MSB-first per byte and land in each sample's k low
// bits with the first-consumed bit in the highest of those positions.

namespace chaosteg {

struct BitPlan {
    std::array<std::uint8_t, 3> bits{}; // per-channel LSB counts
    int channels = 3;                   // 1 (gray) or 3 (RGB)

    static BitPlan rgb(int r, int g, int b) {
        BitPlan p;
        p.bits = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                  static_cast<std::uint8_t>(b)};
        p.channels = 3;
        p.validate_or_throw(r, g, b);
        return p;
    }

    static BitPlan gray(int k) {
        BitPlan p;
        p.bits = {static_cast<std::uint8_t>(k), 0, 0};
        p.channels = 1;
        p.validate_or_throw(k, 0, 0);
        return p;
    }

    // bpp shorthand: 3 -> (1,1,1), 6 -> (2,2,2), 8 -> (4,2,2) for RGB
    // covers; for grayscale the rate is the single channel's k.
    static BitPlan preset(int bpp, int channels) {
        if (channels == 1) {
            if (bpp < 1 || bpp > 8)
                throw Error("grayscale bpp must be in 1..8");
            return gray(bpp);
        }
        switch (bpp) {
        case 3: return rgb(1, 1, 1);
        case 6: return rgb(2, 2, 2);
        case 8: return rgb(4, 2, 2);
        default:
            throw Error("no preset for bpp " + std::to_string(bpp) +
                        " (use 3, 6, or 8, or give an explicit plan)");
        }
    }

    int sum() const noexcept {
        int s = 0;
        for (int c = 0; c < channels; ++c)
            s += bits[c];
        return s;
    }

    int max_bits() const noexcept {
        int m = 0;
        for (int c = 0; c < channels; ++c)
            m = m > bits[c] ? m : bits[c];
        return m;
    }

private:
    void validate_or_throw(int r, int g, int b) const {
        for (int v : {r, g, b})
            if (v < 0 || v > 8)
                throw Error("per-channel bit count must be in 0..8");
        if (sum() < 1)
            throw Error("bit plan must carry at least 1 bit per pixel");
    }
};

// Everything the extractor needs besides the key; travels out-of-band.
struct StegoManifest {
    int secret_width = 0;
    int secret_height = 0;
    int secret_channels = 0;
    int plan_r = 0;
    int plan_g = 0;
    int plan_b = 0;
    int block_size = 0;

    // Materialize the plan against the carrier's channel count.
    BitPlan plan_for(int cover_channels) const {
        if (cover_channels == 1) {
            if (plan_g != 0 || plan_b != 0)
                throw ChannelMismatchError(
                    "manifest plan has G/B bits but carrier is grayscale");
            return BitPlan::gray(plan_r);
        }
        return BitPlan::rgb(plan_r, plan_g, plan_b);
    }
};

inline StegoManifest manifest_from_reader(KvReader& kv) {
    StegoManifest m;
    const auto geti = [&kv](const char* name, long long lo, long long hi) {
        const long long v = kv.integer(name);
        if (v < lo || v > hi)
            throw ParseError(std::string(name) + " out of range");
        return static_cast<int>(v);
    };
    m.secret_width = geti("secret_width", 1, 1 << 24);
    m.secret_height = geti("secret_height", 1, 1 << 24);
    m.secret_channels = geti("secret_channels", 1, 3);
    if (m.secret_channels == 2)
        throw ParseError("secret_channels must be 1 or 3");
    m.plan_r = geti("plan_r", 0, 8);
    m.plan_g = geti("plan_g", 0, 8);
    m.plan_b = geti("plan_b", 0, 8);
    m.block_size = geti("block_size", 1, 1 << 16);
    kv.finish();
    return m;
}

inline StegoManifest parse_manifest(std::istream& in) {
    KvReader kv = KvReader::from_stream(in);
    return manifest_from_reader(kv);
}

inline StegoManifest load_manifest(const std::string& path) {
    KvReader kv = KvReader::from_file(path);
    return manifest_from_reader(kv);
}

inline std::string serialize_manifest(const StegoManifest& m) {
    KvWriter kv;
    kv.comment("stego manifest; required to reveal, keep with the key");
    kv.integer("secret_width", m.secret_width);
    kv.integer("secret_height", m.secret_height);
    kv.integer("secret_channels", m.secret_channels);
    kv.integer("plan_r", m.plan_r);
    kv.integer("plan_g", m.plan_g);
    kv.integer("plan_b", m.plan_b);
    kv.integer("block_size", m.block_size);
    return kv.text();
}

inline void save_manifest(const StegoManifest& m, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open file for writing: " + path);
    out << serialize_manifest(m);
    if (!out.flush())
        throw IoError("write failed: " + path);
}

inline std::uint64_t capacity_bits(const ImageBuffer& cover, const BitPlan& plan) {
    if (plan.channels != cover.channels)
        throw ChannelMismatchError("bit plan is for " + std::to_string(plan.channels) +
                                   " channels, cover has " +
                                   std::to_string(cover.channels));
    return static_cast<std::uint64_t>(cover.width) * cover.height * plan.sum();
}

// Replace the k low bits of a cover byte with a k-bit group. A group
// whose bits already match leaves the byte unchanged.
inline std::uint8_t embed_bits_in_byte(std::uint8_t cover_byte, unsigned bits, int k) {
    const unsigned mask = k >= 8 ? 0xFFu : ((1u << k) - 1u);
    return static_cast<std::uint8_t>((cover_byte & ~mask) | (bits & mask));
}

namespace detail {

class BitReader {
public:
    explicit BitReader(const std::vector<std::uint8_t>& bytes)
        : bytes_(bytes), total_bits_(bytes.size() * 8) {}

    bool done() const noexcept { return pos_ >= total_bits_; }

    // MSB-first within each byte
    unsigned next() {
        const std::size_t byte = pos_ / 8;
        const unsigned shift = 7u - static_cast<unsigned>(pos_ % 8);
        ++pos_;
        return (bytes_[byte] >> shift) & 1u;
    }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t total_bits_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline ImageBuffer embed(const ImageBuffer& cover,
                         const std::vector<std::uint8_t>& payload,
                         const BitPlan& plan) {
    const std::uint64_t needed = static_cast<std::uint64_t>(payload.size()) * 8;
    const std::uint64_t available = capacity_bits(cover, plan);
    if (needed > available)
        throw CapacityError(needed, available);

    ImageBuffer stego = cover;
    detail::BitReader reader(payload);
    const std::size_t n = stego.samples.size();
    for (std::size_t i = 0; i < n && !reader.done(); ++i) {
        const int k = plan.bits[i % cover.channels];
        std::uint8_t byte = stego.samples[i];
        for (int b = 0; b < k && !reader.done(); ++b) {
            const int pos = k - 1 - b; // first-consumed bit sits highest
            const std::uint8_t mask = static_cast<std::uint8_t>(1u << pos);
            byte = static_cast<std::uint8_t>((byte & ~mask) | (reader.next() << pos));
        }
        stego.samples[i] = byte;
    }
    return stego;
}

inline std::vector<std::uint8_t> extract(const ImageBuffer& stego,
                                         std::size_t n_bytes, const BitPlan& plan) {
    const std::uint64_t needed = static_cast<std::uint64_t>(n_bytes) * 8;
    const std::uint64_t available = capacity_bits(stego, plan);
    if (needed > available)
        throw CapacityError(needed, available);

    std::vector<std::uint8_t> out(n_bytes, 0);
    std::size_t bit_pos = 0;
    const std::size_t total_bits = n_bytes * 8;
    const std::size_t n = stego.samples.size();
    for (std::size_t i = 0; i < n && bit_pos < total_bits; ++i) {
        const int k = plan.bits[i % stego.channels];
        const std::uint8_t byte = stego.samples[i];
        for (int b = 0; b < k && bit_pos < total_bits; ++b) {
            const int pos = k - 1 - b;
            const unsigned bit = (byte >> pos) & 1u;
            out[bit_pos / 8] = static_cast<std::uint8_t>(
                out[bit_pos / 8] | (bit << (7 - bit_pos % 8)));
            ++bit_pos;
        }
    }
    return out;
}

} // namespace chaosteg
