#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "chaosteg/errors.hpp"
#include "chaosteg/image.hpp"

// Quality and security analysis: MSE/PSNR, histograms and their
// correlation, per-sample difference bounds, key-space size.

namespace chaosteg {

struct QualityReport {
    double mse = 0.0;
    double psnr_db = 0.0; // +infinity when images are identical
    int max_abs_diff = 0;
    std::vector<double> per_channel_psnr;
};

struct Histogram {
    std::vector<std::array<std::uint64_t, 256>> bins; // one array per channel

    int channels() const noexcept { return static_cast<int>(bins.size()); }
};

namespace detail {

inline void require_same_shape(const ImageBuffer& a, const ImageBuffer& b) {
    if (a.width != b.width || a.height != b.height || a.channels != b.channels)
        throw DimensionMismatchError("images differ in dimensions or channels");
}

inline double psnr_from_mse(double mse) {
    if (mse == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

} // namespace detail

inline double mse(const ImageBuffer& a, const ImageBuffer& b) {
    detail::require_same_shape(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const double d = double(a.samples[i]) - double(b.samples[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(a.samples.size());
}

// Global PSNR over all samples; +infinity when the buffers are equal.
inline double psnr(const ImageBuffer& a, const ImageBuffer& b) {
    return detail::psnr_from_mse(mse(a, b));
}

inline int max_abs_diff(const ImageBuffer& a, const ImageBuffer& b) {
    detail::require_same_shape(a, b);
    int worst = 0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const int d = std::abs(int(a.samples[i]) - int(b.samples[i]));
        worst = d > worst ? d : worst;
    }
    return worst;
}

inline QualityReport compare_images(const ImageBuffer& a, const ImageBuffer& b) {
    QualityReport r;
    r.mse = mse(a, b);
    r.psnr_db = detail::psnr_from_mse(r.mse);
    r.max_abs_diff = max_abs_diff(a, b);
    for (int c = 0; c < a.channels; ++c) {
        double sum = 0.0;
        const std::size_t pixels = a.pixel_count();
        for (std::size_t p = 0; p < pixels; ++p) {
            const std::size_t i = p * a.channels + c;
            const double d = double(a.samples[i]) - double(b.samples[i]);
            sum += d * d;
        }
        r.per_channel_psnr.push_back(detail::psnr_from_mse(sum / double(pixels)));
    }
    return r;
}

inline Histogram histogram(const ImageBuffer& img) {
    Histogram h;
    h.bins.assign(img.channels, {});
    for (std::size_t i = 0; i < img.samples.size(); ++i)
        ++h.bins[i % img.channels][img.samples[i]];
    return h;
}

// Pearson correlation of the concatenated per-channel bin vectors.
inline double histogram_correlation(const Histogram& h1, const Histogram& h2) {
    if (h1.channels() != h2.channels())
        throw ChannelMismatchError("histograms have different channel counts");
    std::vector<double> v1, v2;
    for (int c = 0; c < h1.channels(); ++c)
        for (int bin = 0; bin < 256; ++bin) {
            v1.push_back(static_cast<double>(h1.bins[c][bin]));
            v2.push_back(static_cast<double>(h2.bins[c][bin]));
        }
    const std::size_t n = v1.size();
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m1 += v1[i];
        m2 += v2[i];
    }
    m1 /= double(n);
    m2 /= double(n);
    double cov = 0.0, var1 = 0.0, var2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d1 = v1[i] - m1;
        const double d2 = v2[i] - m2;
        cov += d1 * d2;
        var1 += d1 * d1;
        var2 += d2 * d2;
    }
    if (var1 == 0.0 || var2 == 0.0)
        throw ZeroVarianceError("constant histogram has no defined correlation");
    return cov / std::sqrt(var1 * var2);
}

// Distinguishable keys given finite precision: n_components*log2(1/precision)
// bits. Counts the six chaotic real components by convention.
inline double key_space_bits(int n_components, double precision) {
    return n_components * std::log2(1.0 / precision);
}

// |a-b| amplified for naked-eye inspection of embedding traces.
inline ImageBuffer diff_image(const ImageBuffer& a, const ImageBuffer& b, int gain = 64) {
    detail::require_same_shape(a, b);
    ImageBuffer out(a.width, a.height, a.channels);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        const int d = std::abs(int(a.samples[i]) - int(b.samples[i])) * gain;
        out.samples[i] = static_cast<std::uint8_t>(d > 255 ? 255 : d);
    }
    return out;
}

namespace detail {

inline std::string format_metric(double v) {
    if (std::isinf(v))
        return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace detail

// CSV rows `metric,value`; infinite PSNR prints as "inf".
inline void write_report_csv(std::ostream& out, const QualityReport& r) {
    out << "mse," << detail::format_metric(r.mse) << "\n";
    out << "psnr_db," << detail::format_metric(r.psnr_db) << "\n";
    out << "max_abs_diff," << r.max_abs_diff << "\n";
    static const char* names[] = {"psnr_r_db", "psnr_g_db", "psnr_b_db"};
    if (r.per_channel_psnr.size() == 3)
        for (int c = 0; c < 3; ++c)
            out << names[c] << "," << detail::format_metric(r.per_channel_psnr[c]) << "\n";
}

inline void write_report_text(std::ostream& out, const QualityReport& r) {
    out << "MSE:           " << detail::format_metric(r.mse) << "\n";
    out << "PSNR:          " << detail::format_metric(r.psnr_db) << " dB\n";
    out << "max |diff|:    " << r.max_abs_diff << "\n";
    static const char* names[] = {"R", "G", "B"};
    if (r.per_channel_psnr.size() == 3)
        for (int c = 0; c < 3; ++c)
            out << "PSNR (" << names[c] << "):      "
                << detail::format_metric(r.per_channel_psnr[c]) << " dB\n";
}

// 256 `bin,count` lines per channel, channels in storage order.
inline void write_histogram_csv(std::ostream& out, const Histogram& h) {
    for (int c = 0; c < h.channels(); ++c)
        for (int bin = 0; bin < 256; ++bin)
            out << bin << "," << h.bins[c][bin] << "\n";
}

} // namespace chaosteg
