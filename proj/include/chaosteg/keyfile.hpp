#pragma once

#include <fstream>
#include <istream>
#include <string>

#include "chaosteg/chaos.hpp"
#include "chaosteg/kvfile.hpp"

// Key file: one name=value per line (mu, lambda, x0, y0, z0, w0, a, b,
// block_size). Reals are hexadecimal float literals so a key round-trips
// bit-exactly; the keystream depends on every bit.

namespace chaosteg {

inline ChaoticKey key_from_reader(KvReader& kv) {
    ChaoticKey key;
    key.mu = kv.real("mu");
    key.lambda = kv.real("lambda");
    key.x0 = kv.real("x0");
    key.y0 = kv.real("y0");
    key.z0 = kv.real("z0");
    key.w0 = kv.real("w0");
    key.a = kv.real("a");
    key.b = kv.real("b");
    const long long m = kv.integer("block_size");
    if (m < 1 || m > 1 << 16)
        throw ParseError("block_size out of range");
    key.block_size = static_cast<int>(m);
    kv.finish();
    return key;
}

inline ChaoticKey parse_key(std::istream& in) {
    KvReader kv = KvReader::from_stream(in);
    return key_from_reader(kv);
}

inline ChaoticKey load_key(const std::string& path) {
    KvReader kv = KvReader::from_file(path);
    return key_from_reader(kv);
}

inline std::string serialize_key(const ChaoticKey& key) {
    KvWriter kv;
    kv.comment("chaotic stego key; keep secret");
    kv.real("mu", key.mu);
    kv.real("lambda", key.lambda);
    kv.real("x0", key.x0);
    kv.real("y0", key.y0);
    kv.real("z0", key.z0);
    kv.real("w0", key.w0);
    kv.real("a", key.a);
    kv.real("b", key.b);
    kv.integer("block_size", key.block_size);
    return kv.text();
}

inline void save_key(const ChaoticKey& key, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open file for writing: " + path);
    out << serialize_key(key);
    if (!out.flush())
        throw IoError("write failed: " + path);
}

} // namespace chaosteg
