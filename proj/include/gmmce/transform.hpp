#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmmce/fitting.hpp"
#include "gmmce/gmm.hpp"
#include "gmmce/histogram.hpp"
#include "gmmce/image.hpp"

namespace gmmce {

// Monotone intensity transfer table.
struct Lut {
    std::array<std::uint8_t, 256> table{};

    bool operator==(const Lut&) const = default;
};

inline Lut identity_lut() {
    Lut lut;
    for (int i = 0; i < 256; ++i) lut.table[i] = static_cast<std::uint8_t>(i);
    return lut;
}

namespace detail {

inline void require_spreadable(const DynamicRange& r, const char* where) {
    if (r.hi <= r.lo) {
        throw std::invalid_argument(std::string(where) +
                                    ": degenerate dynamic range [" + std::to_string(r.lo) +
                                    ", " + std::to_string(r.hi) + "]");
    }
}

}  // namespace detail

// Spreads component means across the full intensity axis. Means outside
// [lo, hi] (possible after significance trimming) are clamped in first.
inline std::vector<double> diffuse_means(const GmmModel& model, const DynamicRange& range) {
    detail::require_spreadable(range, "diffuse_means");
    std::vector<double> out;
    out.reserve(model.components.size());
    const double lo = range.lo, hi = range.hi;
    for (const auto& c : model.components) {
        out.push_back((std::clamp(c.mu, lo, hi) - lo) / (hi - lo) * 255.0);
    }
    return out;
}

// Widens component sigmas by the range-expansion factor 256 / (hi - lo).
inline std::vector<double> stretch_variances(const GmmModel& model, const DynamicRange& range) {
    detail::require_spreadable(range, "stretch_variances");
    std::vector<double> out;
    out.reserve(model.components.size());
    for (const auto& c : model.components) {
        out.push_back(c.sigma * 256.0 / (range.hi - range.lo));
    }
    return out;
}

// Evaluates the broadened mixture at every intensity level. Mass lost to
// out-of-range tails is accepted; CDFs are normalized downstream.
inline Histogram build_target_histogram(const std::vector<double>& mus,
                                        const std::vector<double>& sigmas,
                                        const std::vector<double>& weights) {
    if (mus.size() != sigmas.size() || mus.size() != weights.size()) {
        throw std::invalid_argument("build_target_histogram: parameter vectors differ in length");
    }
    for (double s : sigmas) {
        if (!(s >= sigma_floor)) {
            throw std::invalid_argument("build_target_histogram: sigma below sigma_floor");
        }
    }
    Histogram h;
    for (std::size_t k = 0; k < mus.size(); ++k) {
        for (int i = 0; i < 256; ++i) {
            h.bins[i] += weights[k] * gaussian_pdf(static_cast<double>(i), mus[k], sigmas[k]);
        }
    }
    h.recompute_total();
    return h;
}

namespace detail {

inline void require_cdf(const std::array<double, 256>& c, const char* name) {
    for (int i = 1; i < 256; ++i) {
        if (c[i] < c[i - 1]) {
            throw std::invalid_argument(std::string("histogram_match: ") + name +
                                        " is not non-decreasing at " + std::to_string(i));
        }
    }
    if (std::abs(c[255] - 1.0) > 1e-9) {
        throw std::invalid_argument(std::string("histogram_match: ") + name +
                                    " does not end at 1");
    }
}

}  // namespace detail

// Right-continuous inverse: table[g1] = smallest g2 with cdf_dst[g2] >= cdf_src[g1].
inline Lut histogram_match(const std::array<double, 256>& cdf_src,
                           const std::array<double, 256>& cdf_dst) {
    detail::require_cdf(cdf_src, "source CDF");
    detail::require_cdf(cdf_dst, "destination CDF");
    Lut lut;
    int g2 = 0;
    for (int g1 = 0; g1 < 256; ++g1) {
        while (g2 < 255 && cdf_dst[g2] < cdf_src[g1]) ++g2;
        lut.table[g1] = static_cast<std::uint8_t>(g2);
    }
    return lut;
}

inline GrayImage apply_lut(const GrayImage& img, const Lut& lut) {
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.reserve(img.pixels.size());
    for (std::uint8_t v : img.pixels) out.pixels.push_back(lut.table[v]);
    return out;
}

// Full pipeline output. An empty component list marks the degenerate-range
// bypass (constant image): the image is returned unchanged.
struct EnhanceResult {
    GrayImage image;
    GmmModel model;
    DynamicRange range;
    Lut lut;

    bool bypassed() const { return model.components.empty(); }
};

// Histogram -> greedy GMM fit -> mean diffusion + variance stretch ->
// target histogram -> histogram-matching LUT -> remapped image.
inline EnhanceResult enhance(const GrayImage& img, const FitParams& params = {}) {
    validate(params);
    const Histogram h = compute_histogram(img);
    GmmModel model = fit_gmm(h, params);
    const DynamicRange range = dynamic_range(h, params.significance);

    if (range.hi <= range.lo || model.components.empty()) {
        GmmModel marker;
        marker.alpha = params.alpha;
        marker.source_total = model.source_total;
        return EnhanceResult{img, std::move(marker), range, identity_lut()};
    }

    const std::vector<double> mus = diffuse_means(model, range);
    const std::vector<double> sigmas = stretch_variances(model, range);
    std::vector<double> weights;
    weights.reserve(model.components.size());
    for (const auto& c : model.components) weights.push_back(c.weight);

    const Histogram target = build_target_histogram(mus, sigmas, weights);
    const Lut lut = histogram_match(cdf(h), cdf(target));
    return EnhanceResult{apply_lut(img, lut), std::move(model), range, lut};
}

// CSV export: header plus one "input,output" row per intensity level.
inline std::string lut_to_csv(const Lut& lut) {
    std::string out = "input,output\n";
    char row[32];
    for (int i = 0; i < 256; ++i) {
        std::snprintf(row, sizeof(row), "%d,%d\n", i, static_cast<int>(lut.table[i]));
        out += row;
    }
    return out;
}

}  // namespace gmmce
