#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gmmce {

// 8-bit grayscale raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // size == width * height

    std::size_t size() const { return pixels.size(); }

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }

    bool operator==(const GrayImage&) const = default;
};

// Validating constructor for raw pixel buffers.
inline GrayImage make_image(int width, int height, std::vector<std::uint8_t> pixels) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("make_image: width and height must be >= 1, got " +
                                    std::to_string(width) + "x" + std::to_string(height));
    }
    const std::size_t expected =
        static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (pixels.size() != expected) {
        throw std::invalid_argument("make_image: pixel buffer has " +
                                    std::to_string(pixels.size()) + " values, expected " +
                                    std::to_string(expected));
    }
    return GrayImage{width, height, std::move(pixels)};
}

}  // namespace gmmce
