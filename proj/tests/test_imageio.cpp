#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <vector>

#include <zlib.h>

#include "chaosteg/image.hpp"
#include "chaosteg/imageio.hpp"
#include "chaosteg/png.hpp"

#include "test_util.hpp"

using namespace chaosteg;

namespace {

// Independent PNG builder used to feed the decoder files our encoder
// would never produce (chosen filters, alien color types and depths).
std::vector<std::uint8_t> build_png(std::uint32_t width, std::uint32_t height,
                                    int bit_depth, int color_type, int interlace,
                                    const std::vector<std::uint8_t>& raw_scanlines,
                                    const std::vector<std::uint8_t>& plte = {}) {
    auto be32 = [](std::vector<std::uint8_t>& v, std::uint32_t x) {
        v.push_back(std::uint8_t(x >> 24));
        v.push_back(std::uint8_t(x >> 16));
        v.push_back(std::uint8_t(x >> 8));
        v.push_back(std::uint8_t(x));
    };
    auto chunk = [&be32](std::vector<std::uint8_t>& v, const char* type,
                         const std::vector<std::uint8_t>& data) {
        be32(v, std::uint32_t(data.size()));
        const std::size_t start = v.size();
        v.insert(v.end(), type, type + 4);
        v.insert(v.end(), data.begin(), data.end());
        const uLong crc = crc32(0L, v.data() + start, uInt(4 + data.size()));
        be32(v, std::uint32_t(crc));
    };

    std::vector<std::uint8_t> ihdr;
    be32(ihdr, width);
    be32(ihdr, height);
    ihdr.push_back(std::uint8_t(bit_depth));
    ihdr.push_back(std::uint8_t(color_type));
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(std::uint8_t(interlace));

    uLongf comp_len = compressBound(uLong(raw_scanlines.size()));
    std::vector<std::uint8_t> comp(comp_len);
    REQUIRE(compress2(comp.data(), &comp_len, raw_scanlines.data(),
                      uLong(raw_scanlines.size()), 6) == Z_OK);
    comp.resize(comp_len);

    std::vector<std::uint8_t> out(png::kSignature.begin(), png::kSignature.end());
    chunk(out, "IHDR", ihdr);
    if (!plte.empty())
        chunk(out, "PLTE", plte);
    chunk(out, "IDAT", comp);
    chunk(out, "IEND", {});
    return out;
}

// Forward application of a PNG filter to one scanline; the decoder
// must undo this exactly.
std::vector<std::uint8_t> filter_line(int type, const std::vector<std::uint8_t>& cur,
                                      const std::vector<std::uint8_t>& prev,
                                      std::size_t bpp) {
    auto paeth = [](int a, int b, int c) {
        const int p = a + b - c;
        const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
        if (pa <= pb && pa <= pc) return a;
        if (pb <= pc) return b;
        return c;
    };
    std::vector<std::uint8_t> out(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) {
        const int left = i >= bpp ? cur[i - bpp] : 0;
        const int up = prev.empty() ? 0 : prev[i];
        const int upleft = (i >= bpp && !prev.empty()) ? prev[i - bpp] : 0;
        int predictor = 0;
        switch (type) {
        case 0: predictor = 0; break;
        case 1: predictor = left; break;
        case 2: predictor = up; break;
        case 3: predictor = (left + up) / 2; break;
        case 4: predictor = paeth(left, up, upleft); break;
        }
        out[i] = std::uint8_t((int(cur[i]) - predictor) & 0xFF);
    }
    return out;
}

} // namespace

TEST_CASE("PPM with known bytes decodes to the same samples", "[imageio]") {
    const std::vector<std::uint8_t> pixels = {1, 2, 3, 4,  5,  6,
                                              7, 8, 9, 10, 11, 12};
    std::string header = "P6\n2 2\n255\n";
    std::vector<std::uint8_t> file(header.begin(), header.end());
    file.insert(file.end(), pixels.begin(), pixels.end());

    const ImageBuffer img = decode_image(file);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.channels == 3);
    CHECK(img.samples == pixels);
}

TEST_CASE("PNM header comments and whitespace", "[imageio]") {
    std::string header = "P5 # binary gray\n# a comment line\n2\t1 # dims\n255\n";
    std::vector<std::uint8_t> file(header.begin(), header.end());
    file.push_back(42);
    file.push_back(43);
    const ImageBuffer img = decode_image(file);
    CHECK(img.width == 2);
    CHECK(img.height == 1);
    CHECK(img.samples == std::vector<std::uint8_t>{42, 43});
}

TEST_CASE("lossy and unsupported formats are rejected", "[imageio]") {
    std::vector<std::uint8_t> jpeg = {0xFF, 0xD8, 0xFF, 0xE0, 0x00, 0x10, 'J', 'F'};
    CHECK_THROWS_AS(decode_image(jpeg), UnsupportedFormatError);

    std::string ascii_pgm = "P2\n1 1\n255\n0\n";
    std::vector<std::uint8_t> ascii(ascii_pgm.begin(), ascii_pgm.end());
    CHECK_THROWS_AS(decode_image(ascii), UnsupportedFormatError);

    std::vector<std::uint8_t> bmp = {'B', 'M', 0, 0, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(decode_image(bmp), UnsupportedFormatError);
}

TEST_CASE("16-bit sources are rejected", "[imageio]") {
    std::string deep_pnm = "P5\n1 1\n65535\n";
    std::vector<std::uint8_t> pnm_file(deep_pnm.begin(), deep_pnm.end());
    pnm_file.push_back(0);
    pnm_file.push_back(0);
    CHECK_THROWS_AS(decode_image(pnm_file), UnsupportedDepthError);

    const auto png16 = build_png(1, 1, 16, 0, 0, {0, 0, 0});
    CHECK_THROWS_AS(decode_image(png16), UnsupportedDepthError);
}

TEST_CASE("PNG alpha and interlace are rejected", "[imageio]") {
    const auto rgba = build_png(1, 1, 8, 6, 0, {0, 1, 2, 3, 4});
    CHECK_THROWS_AS(decode_image(rgba), UnsupportedFormatError);

    const auto interlaced = build_png(2, 2, 8, 0, 1, {0, 1, 2, 0, 3, 4});
    CHECK_THROWS_AS(decode_image(interlaced), DecodeError);
}

TEST_CASE("PNG decoder reverses every filter type", "[imageio]") {
    // 3x3 RGB image, one scanline per filter family
    const ImageBuffer ref = testutil::make_random_image(3, 3, 3, 77);
    const std::size_t stride = 9;
    for (int f0 = 0; f0 <= 4; ++f0) {
        std::vector<std::uint8_t> raw;
        std::vector<std::uint8_t> prev;
        for (int y = 0; y < 3; ++y) {
            const int ftype = (f0 + y) % 5;
            std::vector<std::uint8_t> line(ref.samples.begin() + y * stride,
                                           ref.samples.begin() + (y + 1) * stride);
            const auto filtered = filter_line(ftype, line, prev, 3);
            raw.push_back(std::uint8_t(ftype));
            raw.insert(raw.end(), filtered.begin(), filtered.end());
            prev = line;
        }
        const auto file = build_png(3, 3, 8, 2, 0, raw);
        const ImageBuffer img = decode_image(file);
        CHECK(img.samples == ref.samples);
    }
}

TEST_CASE("palette PNG expands to RGB", "[imageio]") {
    // 2x1, palette entries: [10,20,30], [200,100,50]
    const std::vector<std::uint8_t> plte = {10, 20, 30, 200, 100, 50};
    const std::vector<std::uint8_t> raw = {0, 1, 0}; // filter 0, indices 1,0
    const auto file = build_png(2, 1, 8, 3, 0, raw, plte);
    const ImageBuffer img = decode_image(file);
    CHECK(img.channels == 3);
    CHECK(img.samples == std::vector<std::uint8_t>{200, 100, 50, 10, 20, 30});
}

TEST_CASE("corrupt PNG streams fail cleanly", "[imageio]") {
    auto file = build_png(2, 1, 8, 0, 0, {0, 7, 9});
    file[file.size() - 5] ^= 0x01; // flip a bit inside IEND's CRC
    CHECK_THROWS_AS(decode_image(file), DecodeError);

    auto truncated = build_png(2, 1, 8, 0, 0, {0, 7, 9});
    truncated.resize(truncated.size() / 2);
    CHECK_THROWS_AS(decode_image(truncated), DecodeError);

    std::vector<std::uint8_t> sig_only(png::kSignature.begin(), png::kSignature.end());
    CHECK_THROWS_AS(decode_image(sig_only), DecodeError);
}

TEST_CASE("truncated PNM raster is rejected", "[imageio]") {
    std::string header = "P6\n2 2\n255\n";
    std::vector<std::uint8_t> file(header.begin(), header.end());
    file.insert(file.end(), 11, 0); // needs 12
    CHECK_THROWS_AS(decode_image(file), DecodeError);
}

TEST_CASE("save/load round-trips losslessly", "[imageio]") {
    testutil::TempDir tmp;
    for (const auto& [ext, channels] : {std::pair{"png", 1}, {"png", 3},
                                        {"pgm", 1}, {"ppm", 3}}) {
        const ImageBuffer img = testutil::make_random_image(13, 7, channels,
                                                            1000 + channels);
        const std::string path = tmp.file(std::string("img.") + ext);
        save_image(img, path);
        const ImageBuffer back = load_image(path);
        INFO("format " << ext << " channels " << channels);
        CHECK(back == img);
    }
}

TEST_CASE("1x1 black PGM writes the canonical bytes", "[imageio]") {
    testutil::TempDir tmp;
    const ImageBuffer img(1, 1, 1, {0});
    const std::string path = tmp.file("black.pgm");
    save_image(img, path);
    const auto data = detail::read_file_bytes(path);
    const std::string expected_header = "P5\n1 1\n255\n";
    REQUIRE(data.size() == expected_header.size() + 1);
    CHECK(std::memcmp(data.data(), expected_header.data(), expected_header.size()) == 0);
    CHECK(data.back() == 0);
    CHECK(load_image(path) == img);
}

TEST_CASE("save errors", "[imageio]") {
    const ImageBuffer gray(2, 2, 1);
    const ImageBuffer rgb(2, 2, 3);
    testutil::TempDir tmp;
    CHECK_THROWS_AS(save_image(gray, tmp.file("x.ppm")), UnsupportedFormatError);
    CHECK_THROWS_AS(save_image(rgb, tmp.file("x.pgm")), UnsupportedFormatError);
    CHECK_THROWS_AS(save_image(rgb, tmp.file("x.jpg")), UnsupportedFormatError);
    CHECK_THROWS_AS(save_image(rgb, "/nonexistent_dir_zz/x.png"), IoError);
}

TEST_CASE("load errors", "[imageio]") {
    CHECK_THROWS_AS(load_image("/nonexistent_dir_zz/missing.png"), IoError);
}

TEST_CASE("flatten_bytes is the row-major interleaved stream", "[imageio]") {
    const ImageBuffer gray(2, 1, 1, {7, 9});
    CHECK(flatten_bytes(gray) == std::vector<std::uint8_t>{7, 9});
    const ImageBuffer rgb(1, 1, 3, {1, 2, 3});
    CHECK(flatten_bytes(rgb) == std::vector<std::uint8_t>{1, 2, 3});
    const ImageBuffer img = testutil::make_random_image(5, 4, 3, 3);
    CHECK(flatten_bytes(img).size() == std::size_t(5 * 4 * 3));
}
