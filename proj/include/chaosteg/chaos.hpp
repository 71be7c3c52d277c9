#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "chaosteg/errors.hpp"

// Chaotic sequence generation. All map arithmetic is plain IEEE-754
// binary64 with a fixed operation order and no fused multiply-add;
// keystreams must be bit-identical across conforming platforms or the
// cipher is not portable. Build with FMA contraction disabled
// (-ffp-contract=off).

namespace chaosteg {

struct ChaoticKey {
    double mu = 3.99;     // logistic control parameter, x-sequence
    double lambda = 3.98; // logistic control parameter, y-sequence
    double x0 = 0.3;
    double y0 = 0.7;
    double z0 = 0.1; // Duffing initial state
    double w0 = 0.1;
    double a = 2.75; // Duffing constants
    double b = 0.2;
    int block_size = 16; // scramble block side length, pixels
};

struct KeyMaterial {
    std::vector<std::uint8_t> keystream;
    std::vector<std::size_t> block_perm; // bijection on {0..B-1}
};

// One logistic iterate, multiply order exactly (mu*x)*(1-x).
inline double logistic_step(double x, double mu) {
    return (mu * x) * (1.0 - x);
}

struct DuffingState {
    double z;
    double w;
};

// One Duffing iterate: z' = w, w' = ((-b*z) + (a*w)) - w^3.
inline DuffingState duffing_step(double z, double w, double a, double b) {
    const double w3 = (w * w) * w;
    return {w, ((-b * z) + (a * w)) - w3};
}

// Map a chaotic state value to a byte by amplifying its low-order
// digits: t = |v|*1e5, then the fractional part of t scaled to 0..255.
inline std::uint8_t quantize(double v) {
    const double t = std::fabs(v) * 1e5;
    const double f = t - std::floor(t);
    return static_cast<std::uint8_t>(std::floor(f * 256.0));
}

// Ascending argsort with stable tie-break by original index.
inline std::vector<std::size_t> permutation_from_stream(
    const std::vector<double>& values, std::size_t n) {
    if (values.size() != n)
        throw LengthMismatchError("value stream length does not match requested permutation size");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::stable_sort(perm.begin(), perm.end(),
                     [&values](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    return perm;
}

namespace detail {

// Joint orbit of the two logistic sequences and the Duffing map.
class Orbit {
public:
    explicit Orbit(const ChaoticKey& k)
        : mu_(k.mu), lambda_(k.lambda), a_(k.a), b_(k.b),
          x_(k.x0), y_(k.y0), z_(k.z0), w_(k.w0) {}

    void advance() {
        x_ = logistic_step(x_, mu_);
        y_ = logistic_step(y_, lambda_);
        const DuffingState d = duffing_step(z_, w_, a_, b_);
        z_ = d.z;
        w_ = d.w;
    }

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    double w() const noexcept { return w_; }

    bool diverged() const noexcept {
        return !std::isfinite(w_) || std::fabs(w_) > 1e6;
    }

private:
    double mu_, lambda_, a_, b_;
    double x_, y_, z_, w_;
};

inline constexpr int kTransientIterations = 1000;
inline constexpr int kProbeSamples = 256;

} // namespace detail

// Checks the static parameter ranges, then probes 256 post-transient
// samples of each sequence and rejects collapsed or diverging orbits.
inline void validate_key(const ChaoticKey& key) {
    const auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
    if (!std::isfinite(key.mu) || !in(key.mu, 3.57, 4.0))
        throw OutOfRangeError("mu", "must be in [3.57, 4]");
    if (!std::isfinite(key.lambda) || !in(key.lambda, 3.57, 4.0))
        throw OutOfRangeError("lambda", "must be in [3.57, 4]");
    if (!std::isfinite(key.x0) || key.x0 <= 0.0 || key.x0 >= 1.0)
        throw OutOfRangeError("x0", "must be in (0, 1)");
    if (!std::isfinite(key.y0) || key.y0 <= 0.0 || key.y0 >= 1.0)
        throw OutOfRangeError("y0", "must be in (0, 1)");
    if (!std::isfinite(key.z0) || std::fabs(key.z0) > 2.0)
        throw OutOfRangeError("z0", "must satisfy |z0| <= 2");
    if (!std::isfinite(key.w0) || std::fabs(key.w0) > 2.0)
        throw OutOfRangeError("w0", "must satisfy |w0| <= 2");
    if (!std::isfinite(key.a))
        throw OutOfRangeError("a", "must be finite");
    if (!std::isfinite(key.b))
        throw OutOfRangeError("b", "must be finite");
    if (key.block_size < 1)
        throw OutOfRangeError("block_size", "must be >= 1");

    detail::Orbit orbit(key);
    for (int i = 0; i < detail::kTransientIterations; ++i) {
        orbit.advance();
        if (orbit.diverged())
            throw DegenerateOrbitError("w");
    }
    std::vector<double> xs, ys, ws;
    xs.reserve(detail::kProbeSamples);
    ys.reserve(detail::kProbeSamples);
    ws.reserve(detail::kProbeSamples);
    for (int i = 0; i < detail::kProbeSamples; ++i) {
        orbit.advance();
        if (orbit.diverged())
            throw DegenerateOrbitError("w");
        xs.push_back(orbit.x());
        ys.push_back(orbit.y());
        ws.push_back(orbit.w());
    }
    const auto constant = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [&v](double s) { return s == v.front(); });
    };
    if (constant(xs))
        throw DegenerateOrbitError("x");
    if (constant(ys))
        throw DegenerateOrbitError("y");
    if (constant(ws))
        throw DegenerateOrbitError("w");
}

// Derives the per-run key material. After a 1000-iteration transient,
// keystream byte i = quantize(x) XOR quantize(w) of the i-th joint
// iterate ("advance, then sample"); the block permutation comes from
// argsort of the next n_blocks values of the y-sequence. Disjoint orbit
// segments drive the XOR stream and the permutation.
inline KeyMaterial gen_key_material(const ChaoticKey& key, std::size_t n_bytes,
                                    std::size_t n_blocks) {
    validate_key(key);
    if (n_blocks < 1)
        throw Error("n_blocks must be >= 1");

    detail::Orbit orbit(key);
    for (int i = 0; i < detail::kTransientIterations; ++i)
        orbit.advance();

    KeyMaterial km;
    km.keystream.resize(n_bytes);
    for (std::size_t i = 0; i < n_bytes; ++i) {
        orbit.advance();
        km.keystream[i] =
            static_cast<std::uint8_t>(quantize(orbit.x()) ^ quantize(orbit.w()));
    }
    std::vector<double> perm_source(n_blocks);
    for (std::size_t i = 0; i < n_blocks; ++i) {
        orbit.advance();
        perm_source[i] = orbit.y();
    }
    km.block_perm = permutation_from_stream(perm_source, n_blocks);
    return km;
}

// Samples a key from the recommended parameter box, re-drawing until
// the orbit probe passes. Deterministic for a fixed generator state.
inline ChaoticKey random_key(std::mt19937_64& rng, int block_size = 16) {
    // Portable uniform in [0,1); uniform_real_distribution is
    // implementation-defined.
    const auto uniform01 = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    for (;;) {
        ChaoticKey key;
        key.mu = 3.57 + uniform01() * 0.43;
        key.lambda = 3.57 + uniform01() * 0.43;
        key.x0 = 0.01 + uniform01() * 0.98;
        key.y0 = 0.01 + uniform01() * 0.98;
        key.z0 = -0.5 + uniform01();
        key.w0 = -0.5 + uniform01();
        key.block_size = block_size;
        try {
            validate_key(key);
            return key;
        } catch (const KeyError&) {
            // collapsed or escaping orbit; draw again
        }
    }
}

} // namespace chaosteg
