#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "chaosteg/errors.hpp"
#include "chaosteg/image.hpp"
#include "chaosteg/png.hpp"

// Load/save of lossless 8-bit raster files: PNG, binary PGM (P5),
// binary PPM (P6). Lossy formats are rejected outright; LSB payloads do
// not survive recompression.

namespace chaosteg {

namespace detail {

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open file: " + path);
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("read failed: " + path);
    return data;
}

inline void write_file_bytes(const std::string& path,
                             const std::uint8_t* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open file for writing: " + path);
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out.flush())
        throw IoError("write failed: " + path);
}

// Next whitespace-separated PNM header token, skipping '#' comments.
inline std::string pnm_token(const std::vector<std::uint8_t>& data, std::size_t& pos) {
    while (pos < data.size()) {
        if (std::isspace(data[pos])) {
            ++pos;
        } else if (data[pos] == '#') {
            while (pos < data.size() && data[pos] != '\n')
                ++pos;
        } else {
            break;
        }
    }
    std::string token;
    while (pos < data.size() && !std::isspace(data[pos]) && data[pos] != '#')
        token.push_back(static_cast<char>(data[pos++]));
    if (token.empty())
        throw DecodeError("truncated PNM header");
    return token;
}

inline int pnm_int(const std::vector<std::uint8_t>& data, std::size_t& pos) {
    const std::string tok = pnm_token(data, pos);
    for (char c : tok)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw DecodeError("bad PNM header token: " + tok);
    return std::stoi(tok);
}

inline ImageBuffer decode_pnm(const std::vector<std::uint8_t>& data) {
    const int channels = data[1] == '5' ? 1 : 3;
    std::size_t pos = 2;
    const int width = pnm_int(data, pos);
    const int height = pnm_int(data, pos);
    const int maxval = pnm_int(data, pos);
    if (width < 1 || height < 1)
        throw DecodeError("bad PNM dimensions");
    if (maxval > 255)
        throw UnsupportedDepthError("16-bit PNM not supported");
    if (maxval < 1)
        throw DecodeError("bad PNM maxval");
    if (pos >= data.size() || !std::isspace(data[pos]))
        throw DecodeError("malformed PNM header");
    ++pos; // single whitespace separates header from raster
    const std::size_t needed =
        static_cast<std::size_t>(width) * height * channels;
    if (data.size() - pos != needed)
        throw DecodeError("PNM raster size mismatch");
    return ImageBuffer(width, height, channels,
                       std::vector<std::uint8_t>(data.begin() + pos, data.end()));
}

inline std::string lower_extension(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos)
        return {};
    std::string ext = path.substr(dot + 1);
    for (char& c : ext)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

} // namespace detail

inline ImageBuffer decode_image(const std::vector<std::uint8_t>& data) {
    if (data.size() < 8)
        throw UnsupportedFormatError("file too short to be an image");
    if (png::has_signature(data.data(), data.size()))
        return png::decode(data.data(), data.size());
    if (data[0] == 'P' && (data[1] == '5' || data[1] == '6'))
        return detail::decode_pnm(data);
    if (data[0] == 0xFF && data[1] == 0xD8)
        throw UnsupportedFormatError(
            "JPEG is lossy and cannot carry LSB payloads; use PNG/PGM/PPM");
    if (data[0] == 'P' && (data[1] == '2' || data[1] == '3'))
        throw UnsupportedFormatError("ASCII PNM not supported; use binary P5/P6");
    throw UnsupportedFormatError("unrecognized image format");
}

inline ImageBuffer load_image(const std::string& path) {
    return decode_image(detail::read_file_bytes(path));
}

inline void save_image(const ImageBuffer& img, const std::string& path) {
    const std::string ext = detail::lower_extension(path);
    if (ext == "png") {
        const auto bytes = png::encode(img);
        detail::write_file_bytes(path, bytes.data(), bytes.size());
    } else if (ext == "pgm" || ext == "ppm") {
        if (ext == "pgm" && img.channels != 1)
            throw UnsupportedFormatError("PGM holds grayscale only; use PPM or PNG");
        if (ext == "ppm" && img.channels != 3)
            throw UnsupportedFormatError("PPM holds RGB only; use PGM or PNG");
        std::string header = std::string(ext == "pgm" ? "P5" : "P6") + "\n" +
                             std::to_string(img.width) + " " +
                             std::to_string(img.height) + "\n255\n";
        std::vector<std::uint8_t> bytes(header.begin(), header.end());
        bytes.insert(bytes.end(), img.samples.begin(), img.samples.end());
        detail::write_file_bytes(path, bytes.data(), bytes.size());
    } else {
        throw UnsupportedFormatError("unsupported output extension ." + ext +
                                     " (use .png/.pgm/.ppm)");
    }
}

} // namespace chaosteg
