#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <zlib.h>

#include "chaosteg/errors.hpp"
#include "chaosteg/image.hpp"

// Minimal PNG codec on top of zlib. Reads non-interlaced 8-bit
// grayscale, truecolor, and palette images; writes non-interlaced 8-bit
// grayscale or truecolor with filter type None. Alpha and 16-bit depth
// are out of policy and rejected.

namespace chaosteg::png {

inline constexpr std::array<std::uint8_t, 8> kSignature = {0x89, 0x50, 0x4E, 0x47,
                                                           0x0D, 0x0A, 0x1A, 0x0A};

inline bool has_signature(const std::uint8_t* data, std::size_t size) {
    return size >= kSignature.size() &&
           std::memcmp(data, kSignature.data(), kSignature.size()) == 0;
}

namespace detail {

inline std::uint32_t read_be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

inline void append_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

inline void append_chunk(std::vector<std::uint8_t>& out, const char type[5],
                         const std::uint8_t* data, std::size_t size) {
    append_be32(out, static_cast<std::uint32_t>(size));
    const std::size_t type_pos = out.size();
    out.insert(out.end(), type, type + 4);
    if (size > 0)
        out.insert(out.end(), data, data + size);
    const uLong crc =
        crc32(0L, out.data() + type_pos, static_cast<uInt>(4 + size));
    append_be32(out, static_cast<std::uint32_t>(crc));
}

inline std::uint8_t paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a);
    const int pb = std::abs(p - b);
    const int pc = std::abs(p - c);
    if (pa <= pb && pa <= pc)
        return static_cast<std::uint8_t>(a);
    if (pb <= pc)
        return static_cast<std::uint8_t>(b);
    return static_cast<std::uint8_t>(c);
}

// Reverses the per-scanline filters in place on the raw inflated data
// (filter byte + scanline per row).
inline void unfilter(std::vector<std::uint8_t>& raw, std::size_t height,
                     std::size_t stride, std::size_t bpp) {
    std::vector<std::uint8_t> prev(stride, 0);
    for (std::size_t y = 0; y < height; ++y) {
        std::uint8_t* row = raw.data() + y * (stride + 1);
        const std::uint8_t filter = row[0];
        std::uint8_t* cur = row + 1;
        switch (filter) {
        case 0:
            break;
        case 1: // Sub
            for (std::size_t i = bpp; i < stride; ++i)
                cur[i] = static_cast<std::uint8_t>(cur[i] + cur[i - bpp]);
            break;
        case 2: // Up
            for (std::size_t i = 0; i < stride; ++i)
                cur[i] = static_cast<std::uint8_t>(cur[i] + prev[i]);
            break;
        case 3: // Average
            for (std::size_t i = 0; i < stride; ++i) {
                const int left = i >= bpp ? cur[i - bpp] : 0;
                cur[i] = static_cast<std::uint8_t>(cur[i] + ((left + prev[i]) >> 1));
            }
            break;
        case 4: // Paeth
            for (std::size_t i = 0; i < stride; ++i) {
                const int left = i >= bpp ? cur[i - bpp] : 0;
                const int upleft = i >= bpp ? prev[i - bpp] : 0;
                cur[i] = static_cast<std::uint8_t>(cur[i] + paeth(left, prev[i], upleft));
            }
            break;
        default:
            throw DecodeError("invalid PNG filter type " + std::to_string(filter));
        }
        std::memcpy(prev.data(), cur, stride);
    }
}

} // namespace detail

inline ImageBuffer decode(const std::uint8_t* data, std::size_t size) {
    if (!has_signature(data, size))
        throw DecodeError("missing PNG signature");

    std::size_t pos = kSignature.size();
    bool seen_ihdr = false;
    bool seen_iend = false;
    std::uint32_t width = 0, height = 0;
    int bit_depth = 0, color_type = 0;
    std::vector<std::uint8_t> idat;
    std::vector<std::array<std::uint8_t, 3>> palette;

    while (pos < size) {
        if (size - pos < 12)
            throw DecodeError("truncated PNG chunk");
        const std::uint32_t length = detail::read_be32(data + pos);
        if (length > (1u << 30) || size - pos - 12 < length)
            throw DecodeError("truncated PNG chunk");
        const char* type = reinterpret_cast<const char*>(data + pos + 4);
        const std::uint8_t* chunk = data + pos + 8;
        const std::uint32_t crc_stored = detail::read_be32(data + pos + 8 + length);
        const uLong crc_actual = crc32(0L, data + pos + 4, 4 + length);
        if (crc_stored != static_cast<std::uint32_t>(crc_actual))
            throw DecodeError("PNG chunk CRC mismatch");
        const std::string type_str(type, 4);

        if (type_str == "IHDR") {
            if (seen_ihdr || length != 13)
                throw DecodeError("bad IHDR");
            seen_ihdr = true;
            width = detail::read_be32(chunk);
            height = detail::read_be32(chunk + 4);
            bit_depth = chunk[8];
            color_type = chunk[9];
            const int compression = chunk[10];
            const int filter = chunk[11];
            const int interlace = chunk[12];
            if (width == 0 || height == 0)
                throw DecodeError("zero PNG dimensions");
            if (compression != 0 || filter != 0)
                throw DecodeError("unsupported PNG compression/filter method");
            if (interlace != 0)
                throw DecodeError("interlaced PNG not supported");
            if (bit_depth != 8)
                throw UnsupportedDepthError("only 8-bit PNG supported, got depth " +
                                            std::to_string(bit_depth));
            if (color_type == 4 || color_type == 6)
                throw UnsupportedFormatError("PNG alpha channels not supported");
            if (color_type != 0 && color_type != 2 && color_type != 3)
                throw DecodeError("unknown PNG color type " + std::to_string(color_type));
        } else if (type_str == "PLTE") {
            if (!seen_ihdr || length % 3 != 0 || length / 3 > 256)
                throw DecodeError("bad PLTE");
            for (std::uint32_t i = 0; i < length; i += 3)
                palette.push_back({chunk[i], chunk[i + 1], chunk[i + 2]});
        } else if (type_str == "IDAT") {
            if (!seen_ihdr)
                throw DecodeError("IDAT before IHDR");
            idat.insert(idat.end(), chunk, chunk + length);
        } else if (type_str == "tRNS") {
            throw UnsupportedFormatError("PNG transparency not supported");
        } else if (type_str == "IEND") {
            seen_iend = true;
            break;
        }
        // other ancillary chunks skipped
        pos += 12 + length;
    }
    if (!seen_ihdr || !seen_iend)
        throw DecodeError("incomplete PNG stream");
    if (color_type == 3 && palette.empty())
        throw DecodeError("palette image without PLTE");

    const std::size_t src_channels = color_type == 2 ? 3 : 1;
    const std::uint64_t stride64 = std::uint64_t(width) * src_channels;
    const std::uint64_t raw_size64 = (stride64 + 1) * height;
    if (raw_size64 > (1ull << 31))
        throw DecodeError("PNG too large");
    const std::size_t stride = static_cast<std::size_t>(stride64);

    std::vector<std::uint8_t> raw(static_cast<std::size_t>(raw_size64));
    uLongf dest_len = static_cast<uLongf>(raw.size());
    const int rc = uncompress(raw.data(), &dest_len, idat.data(),
                              static_cast<uLong>(idat.size()));
    if (rc != Z_OK || dest_len != raw.size())
        throw DecodeError("PNG image data does not inflate to expected size");

    detail::unfilter(raw, height, stride, src_channels);

    const int out_channels = color_type == 0 ? 1 : 3;
    ImageBuffer img(static_cast<int>(width), static_cast<int>(height), out_channels);
    for (std::size_t y = 0; y < height; ++y) {
        const std::uint8_t* line = raw.data() + y * (stride + 1) + 1;
        if (color_type == 3) {
            for (std::size_t x = 0; x < width; ++x) {
                const std::uint8_t idx = line[x];
                if (idx >= palette.size())
                    throw DecodeError("palette index out of range");
                const auto& rgb = palette[idx];
                std::uint8_t* dst = img.samples.data() + (y * width + x) * 3;
                dst[0] = rgb[0];
                dst[1] = rgb[1];
                dst[2] = rgb[2];
            }
        } else {
            std::memcpy(img.samples.data() + y * stride, line, stride);
        }
    }
    return img;
}

inline std::vector<std::uint8_t> encode(const ImageBuffer& img) {
    const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * img.height);
    for (int y = 0; y < img.height; ++y) {
        raw.push_back(0); // filter: None
        const std::uint8_t* row = img.samples.data() + std::size_t(y) * stride;
        raw.insert(raw.end(), row, row + stride);
    }

    uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> comp(comp_len);
    const int rc = compress2(comp.data(), &comp_len, raw.data(),
                             static_cast<uLong>(raw.size()), Z_DEFAULT_COMPRESSION);
    if (rc != Z_OK)
        throw Error("deflate failed");
    comp.resize(comp_len);

    std::vector<std::uint8_t> out(kSignature.begin(), kSignature.end());
    std::uint8_t ihdr[13];
    ihdr[0] = static_cast<std::uint8_t>(std::uint32_t(img.width) >> 24);
    ihdr[1] = static_cast<std::uint8_t>(std::uint32_t(img.width) >> 16);
    ihdr[2] = static_cast<std::uint8_t>(std::uint32_t(img.width) >> 8);
    ihdr[3] = static_cast<std::uint8_t>(img.width);
    ihdr[4] = static_cast<std::uint8_t>(std::uint32_t(img.height) >> 24);
    ihdr[5] = static_cast<std::uint8_t>(std::uint32_t(img.height) >> 16);
    ihdr[6] = static_cast<std::uint8_t>(std::uint32_t(img.height) >> 8);
    ihdr[7] = static_cast<std::uint8_t>(img.height);
    ihdr[8] = 8;                                   // bit depth
    ihdr[9] = img.channels == 1 ? 0 : 2;           // gray / truecolor
    ihdr[10] = 0;                                  // compression
    ihdr[11] = 0;                                  // filter method
    ihdr[12] = 0;                                  // non-interlaced
    detail::append_chunk(out, "IHDR", ihdr, sizeof(ihdr));
    detail::append_chunk(out, "IDAT", comp.data(), comp.size());
    detail::append_chunk(out, "IEND", nullptr, 0);
    return out;
}

} // namespace chaosteg::png
