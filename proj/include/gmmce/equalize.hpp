#pragma once

#include <cmath>
#include <cstdint>

#include "gmmce/histogram.hpp"
#include "gmmce/image.hpp"
#include "gmmce/transform.hpp"

namespace gmmce {

// Classical global histogram equalization: T(v) = round(255 * CDF(v)),
// rounding halves away from zero.
inline Lut equalize_lut(const Histogram& h) {
    const std::array<double, 256> c = cdf(h);
    Lut lut;
    for (int v = 0; v < 256; ++v) {
        lut.table[v] = static_cast<std::uint8_t>(std::lround(255.0 * c[v]));
    }
    return lut;
}

inline GrayImage histogram_equalize(const GrayImage& img) {
    return apply_lut(img, equalize_lut(compute_histogram(img)));
}

}  // namespace gmmce
