#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <map>
#include <utility>
#include <vector>

#include "chaosteg/chaos.hpp"
#include "chaosteg/errors.hpp"
#include "chaosteg/image.hpp"

// Secret-image encryption: chaotic block scramble followed by XOR with
// the keystream, and the exact inverse.

namespace chaosteg {

struct BlockGrid {
    int rows = 0;
    int cols = 0;
    int block_size = 0;

    static BlockGrid of(const ImageBuffer& img, int m) {
        if (m < 1)
            throw Error("block size must be >= 1");
        BlockGrid g;
        g.block_size = m;
        g.rows = (img.height + m - 1) / m;
        g.cols = (img.width + m - 1) / m;
        return g;
    }

    std::size_t count() const noexcept {
        return static_cast<std::size_t>(rows) * cols;
    }
};

inline std::vector<std::uint8_t> xor_bytes(const std::vector<std::uint8_t>& data,
                                           const std::vector<std::uint8_t>& keystream) {
    if (data.size() != keystream.size())
        throw LengthMismatchError("data and keystream lengths differ");
    std::vector<std::uint8_t> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        out[i] = static_cast<std::uint8_t>(data[i] ^ keystream[i]);
    return out;
}

namespace detail {

// Resolves the block-level move list: dst_block[j] receives
// src_block[assignment[j]]. Edge blocks may be smaller than m x m;
// blocks only trade places within their exact-shape class, with the
// chaotic ranking applied inside each class. With all blocks full-size
// (one class) this is exactly `perm` itself.
inline std::vector<std::size_t> block_assignment(const ImageBuffer& img,
                                                 const std::vector<std::size_t>& perm,
                                                 int m) {
    const BlockGrid grid = BlockGrid::of(img, m);
    const std::size_t n = grid.count();
    if (perm.size() != n)
        throw PermLengthMismatchError("permutation length " + std::to_string(perm.size()) +
                                      " does not match block count " + std::to_string(n));
    std::vector<std::size_t> rank(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        if (perm[j] >= n || rank[perm[j]] != n)
            throw PermLengthMismatchError("permutation is not a bijection");
        rank[perm[j]] = j;
    }

    const auto shape_of = [&](std::size_t b) {
        const int br = static_cast<int>(b) / grid.cols;
        const int bc = static_cast<int>(b) % grid.cols;
        const int bh = std::min(m, img.height - br * m);
        const int bw = std::min(m, img.width - bc * m);
        return std::pair<int, int>{bh, bw};
    };

    std::map<std::pair<int, int>, std::vector<std::size_t>> classes;
    for (std::size_t b = 0; b < n; ++b)
        classes[shape_of(b)].push_back(b); // grid order within class

    std::vector<std::size_t> assignment(n);
    for (auto& [shape, members] : classes) {
        std::vector<std::size_t> by_rank = members;
        std::sort(by_rank.begin(), by_rank.end(),
                  [&rank](std::size_t i, std::size_t j) { return rank[i] < rank[j]; });
        for (std::size_t j = 0; j < members.size(); ++j)
            assignment[members[j]] = by_rank[j];
    }
    return assignment;
}

inline void copy_block(const ImageBuffer& src, std::size_t src_block,
                       ImageBuffer& dst, std::size_t dst_block,
                       const BlockGrid& grid) {
    const int m = grid.block_size;
    const int sr = static_cast<int>(src_block) / grid.cols * m;
    const int sc = static_cast<int>(src_block) % grid.cols * m;
    const int dr = static_cast<int>(dst_block) / grid.cols * m;
    const int dc = static_cast<int>(dst_block) % grid.cols * m;
    const int bh = std::min(m, src.height - sr);
    const int bw = std::min(m, src.width - sc);
    const std::size_t row_bytes = static_cast<std::size_t>(bw) * src.channels;
    for (int y = 0; y < bh; ++y) {
        const std::uint8_t* s =
            src.samples.data() + (std::size_t(sr + y) * src.width + sc) * src.channels;
        std::uint8_t* d =
            dst.samples.data() + (std::size_t(dr + y) * dst.width + dc) * dst.channels;
        std::memcpy(d, s, row_bytes);
    }
}

} // namespace detail

// Rearranges m x m pixel blocks: output block j = input block perm[j]
// (per shape class; see block_assignment). Whole pixels move together.
inline ImageBuffer scramble(const ImageBuffer& img,
                            const std::vector<std::size_t>& perm, int m) {
    const BlockGrid grid = BlockGrid::of(img, m);
    const auto assignment = detail::block_assignment(img, perm, m);
    ImageBuffer out(img.width, img.height, img.channels);
    for (std::size_t j = 0; j < assignment.size(); ++j)
        detail::copy_block(img, assignment[j], out, j, grid);
    return out;
}

inline ImageBuffer unscramble(const ImageBuffer& img,
                              const std::vector<std::size_t>& perm, int m) {
    const BlockGrid grid = BlockGrid::of(img, m);
    const auto assignment = detail::block_assignment(img, perm, m);
    ImageBuffer out(img.width, img.height, img.channels);
    for (std::size_t j = 0; j < assignment.size(); ++j)
        detail::copy_block(img, j, out, assignment[j], grid);
    return out;
}

// Scramble-then-XOR under key material derived from the key; output has
// the secret's dimensions and channel count.
inline ImageBuffer encrypt_secret(const ImageBuffer& secret, const ChaoticKey& key) {
    const BlockGrid grid = BlockGrid::of(secret, key.block_size);
    const KeyMaterial km = gen_key_material(key, secret.sample_count(), grid.count());
    ImageBuffer scrambled = scramble(secret, km.block_perm, key.block_size);
    return ImageBuffer(secret.width, secret.height, secret.channels,
                       xor_bytes(scrambled.samples, km.keystream));
}

inline ImageBuffer decrypt_secret(const ImageBuffer& cipher_img, const ChaoticKey& key) {
    const BlockGrid grid = BlockGrid::of(cipher_img, key.block_size);
    const KeyMaterial km = gen_key_material(key, cipher_img.sample_count(), grid.count());
    const ImageBuffer xored(cipher_img.width, cipher_img.height, cipher_img.channels,
                            xor_bytes(cipher_img.samples, km.keystream));
    return unscramble(xored, km.block_perm, key.block_size);
}

} // namespace chaosteg
