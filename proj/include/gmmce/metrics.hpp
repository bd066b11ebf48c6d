#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gmmce/gmm.hpp"
#include "gmmce/histogram.hpp"
#include "gmmce/image.hpp"

namespace gmmce {

// Element k is the residual of the model truncated to its first k components,
// for k = 0..len(components).
inline std::vector<double> residual_curve(const GmmModel& model, const Histogram& h) {
    std::vector<double> curve;
    curve.reserve(model.components.size() + 1);
    GmmModel prefix;
    prefix.alpha = model.alpha;
    prefix.source_total = model.source_total;
    curve.push_back(residual_sse(prefix, h));
    for (const auto& c : model.components) {
        prefix.components.push_back(c);
        curve.push_back(residual_sse(prefix, h));
    }
    return curve;
}

inline double mean_brightness_error(const GrayImage& a, const GrayImage& b) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("mean_brightness_error: image dimensions differ");
    }
    double sum_a = 0.0, sum_b = 0.0;
    for (std::uint8_t v : a.pixels) sum_a += v;
    for (std::uint8_t v : b.pixels) sum_b += v;
    const double n = static_cast<double>(a.pixels.size());
    return std::abs(sum_a / n - sum_b / n);
}

// Shannon entropy in bits; 0 for a delta, 8 for a uniform 256-level histogram.
inline double shannon_entropy(const Histogram& h) {
    double total = 0.0;
    for (double v : h.bins) total += v;
    if (!(total > 0.0)) {
        throw std::invalid_argument("shannon_entropy: histogram has no mass");
    }
    double e = 0.0;
    for (double v : h.bins) {
        if (v > 0.0) {
            const double p = v / total;
            e -= p * std::log2(p);
        }
    }
    return e;
}

}  // namespace gmmce
