#pragma once

#include <cstdint>
#include <vector>

#include "chaosteg/chaos.hpp"
#include "chaosteg/cipher.hpp"
#include "chaosteg/errors.hpp"
#include "chaosteg/image.hpp"
#include "chaosteg/stego.hpp"

// Full hide/reveal dataflow: encrypt the secret with the chaotic
// cipher, then spread the ciphertext over the cover's low bits; the
// reverse path extracts and decrypts.

namespace chaosteg {

struct HideResult {
    ImageBuffer stego;
    ImageBuffer encrypted_secret; // intermediate, useful for inspection
    StegoManifest manifest;
};

inline HideResult hide(const ImageBuffer& cover, const ImageBuffer& secret,
                       const ChaoticKey& key, const BitPlan& plan) {
    HideResult result;
    result.encrypted_secret = encrypt_secret(secret, key);
    result.stego = embed(cover, flatten_bytes(result.encrypted_secret), plan);
    result.manifest.secret_width = secret.width;
    result.manifest.secret_height = secret.height;
    result.manifest.secret_channels = secret.channels;
    result.manifest.plan_r = plan.bits[0];
    result.manifest.plan_g = plan.channels == 3 ? plan.bits[1] : 0;
    result.manifest.plan_b = plan.channels == 3 ? plan.bits[2] : 0;
    result.manifest.block_size = key.block_size;
    return result;
}

// The manifest records the block size the hide run actually used, so it
// overrides the key file's value here.
inline ImageBuffer reveal(const ImageBuffer& stego, const ChaoticKey& key,
                          const StegoManifest& manifest) {
    const BitPlan plan = manifest.plan_for(stego.channels);
    const std::size_t n_bytes = static_cast<std::size_t>(manifest.secret_width) *
                                manifest.secret_height * manifest.secret_channels;
    const std::vector<std::uint8_t> cipher_bytes = extract(stego, n_bytes, plan);
    const ImageBuffer cipher_img(manifest.secret_width, manifest.secret_height,
                                 manifest.secret_channels, cipher_bytes);
    ChaoticKey effective = key;
    effective.block_size = manifest.block_size;
    return decrypt_secret(cipher_img, effective);
}

} // namespace chaosteg
