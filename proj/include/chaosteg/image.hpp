#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chaosteg/errors.hpp"

namespace chaosteg {

// 8-bit raster, row-major, channel-interleaved (R,G,B for 3 channels).
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 0; // 1 = grayscale, 3 = RGB
    std::vector<std::uint8_t> samples;

    ImageBuffer() = default;

    ImageBuffer(int w, int h, int c)
        : width(w), height(h), channels(c),
          samples(checked_size(w, h, c), 0) {}

    ImageBuffer(int w, int h, int c, std::vector<std::uint8_t> data)
        : width(w), height(h), channels(c), samples(std::move(data)) {
        if (samples.size() != checked_size(w, h, c))
            throw Error("sample count does not match width*height*channels");
    }

    std::size_t sample_count() const noexcept { return samples.size(); }
    std::size_t pixel_count() const noexcept {
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

    std::uint8_t& at(int x, int y, int c) {
        return samples[index(x, y, c)];
    }
    std::uint8_t at(int x, int y, int c) const {
        return samples[index(x, y, c)];
    }

    bool operator==(const ImageBuffer& other) const = default;

private:
    std::size_t index(int x, int y, int c) const noexcept {
        return (static_cast<std::size_t>(y) * width + x) * channels + c;
    }

    static std::size_t checked_size(int w, int h, int c) {
        if (w < 1 || h < 1)
            throw Error("image dimensions must be at least 1x1");
        if (c != 1 && c != 3)
            throw Error("channel count must be 1 or 3");
        const auto n = static_cast<std::uint64_t>(w) * h * c;
        if (n > (1ull << 31))
            throw Error("image too large");
        return static_cast<std::size_t>(n);
    }
};

// Canonical byte stream of an image: row-major, channels interleaved.
inline std::vector<std::uint8_t> flatten_bytes(const ImageBuffer& img) {
    return img.samples;
}

} // namespace chaosteg
