#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gmmce/image.hpp"

namespace gmmce {

// 256-bin frequency vector. Bins are real-valued: smoothing and component
// subtraction produce fractional frequencies.
struct Histogram {
    std::array<double, 256> bins{};
    double total = 0.0;

    void recompute_total() { total = std::accumulate(bins.begin(), bins.end(), 0.0); }
};

inline Histogram make_histogram(const std::array<double, 256>& bins) {
    for (int i = 0; i < 256; ++i) {
        if (bins[i] < 0.0) {
            throw std::invalid_argument("make_histogram: negative frequency at bin " +
                                        std::to_string(i));
        }
    }
    Histogram h{bins, 0.0};
    h.recompute_total();
    return h;
}

// Interval of significantly populated intensity levels.
struct DynamicRange {
    int lo = 0;
    int hi = 0;

    bool operator==(const DynamicRange&) const = default;
};

inline Histogram compute_histogram(const GrayImage& img) {
    Histogram h;
    for (std::uint8_t v : img.pixels) h.bins[v] += 1.0;
    h.total = static_cast<double>(img.pixels.size());
    return h;
}

// Centered (2n+1)-tap box average with replicate padding at both edges.
inline Histogram smooth(const Histogram& h, int n) {
    if (n < 1) {
        throw std::invalid_argument("smooth: half-width must be >= 1, got " +
                                    std::to_string(n));
    }
    Histogram out;
    const double taps = 2.0 * n + 1.0;
    for (int i = 0; i < 256; ++i) {
        double s = 0.0;
        for (int j = i - n; j <= i + n; ++j) {
            s += h.bins[std::clamp(j, 0, 255)];
        }
        out.bins[i] = s / taps;
    }
    out.recompute_total();
    return out;
}

// Normalized cumulative distribution; result[255] == 1 exactly.
inline std::array<double, 256> cdf(const Histogram& h) {
    std::array<double, 256> c{};
    double running = 0.0;
    for (int i = 0; i < 256; ++i) {
        running += h.bins[i];
        c[i] = running;
    }
    if (!(running > 0.0)) {
        throw std::invalid_argument("cdf: histogram has no mass");
    }
    for (double& v : c) v /= running;
    return c;
}

// Smallest and largest intensity whose frequency exceeds significance * total.
// Falls back to strictly non-zero bins when nothing passes the threshold.
inline DynamicRange dynamic_range(const Histogram& h, double significance) {
    if (significance < 0.0 || significance >= 1.0) {
        throw std::invalid_argument("dynamic_range: significance must be in [0, 1)");
    }
    const double total = std::accumulate(h.bins.begin(), h.bins.end(), 0.0);
    if (!(total > 0.0)) {
        throw std::invalid_argument("dynamic_range: histogram has no mass");
    }
    const double threshold = significance * total;
    int lo = -1, hi = -1;
    for (int i = 0; i < 256; ++i) {
        if (h.bins[i] > threshold) {
            if (lo < 0) lo = i;
            hi = i;
        }
    }
    if (lo < 0) {
        for (int i = 0; i < 256; ++i) {
            if (h.bins[i] > 0.0) {
                if (lo < 0) lo = i;
                hi = i;
            }
        }
    }
    return DynamicRange{lo, hi};
}

// CSV export: header plus one "intensity,frequency" row per bin.
inline std::string histogram_to_csv(const Histogram& h) {
    std::string out = "intensity,frequency\n";
    char row[64];
    for (int i = 0; i < 256; ++i) {
        std::snprintf(row, sizeof(row), "%d,%.10g\n", i, h.bins[i]);
        out += row;
    }
    return out;
}

}  // namespace gmmce
