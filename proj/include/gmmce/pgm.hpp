#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gmmce/image.hpp"

namespace gmmce {

// Raised for any structurally invalid PGM stream.
class PgmParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a file cannot be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct PgmCursor {
    std::string_view data;
    std::size_t pos = 0;

    bool eof() const { return pos >= data.size(); }
    char peek() const { return data[pos]; }
};

inline bool is_pgm_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Skips whitespace and '#'-to-end-of-line comments between header tokens.
inline void skip_space_and_comments(PgmCursor& cur) {
    while (!cur.eof()) {
        if (is_pgm_space(cur.peek())) {
            ++cur.pos;
        } else if (cur.peek() == '#') {
            while (!cur.eof() && cur.peek() != '\n') ++cur.pos;
        } else {
            break;
        }
    }
}

inline long long next_uint(PgmCursor& cur, const char* what) {
    skip_space_and_comments(cur);
    if (cur.eof() || !std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        throw PgmParseError(std::string("malformed header: expected ") + what);
    }
    long long value = 0;
    while (!cur.eof() && std::isdigit(static_cast<unsigned char>(cur.peek()))) {
        value = value * 10 + (cur.peek() - '0');
        if (value > 100'000'000) {
            throw PgmParseError(std::string("malformed header: ") + what + " out of range");
        }
        ++cur.pos;
    }
    return value;
}

}  // namespace detail

// Parses a PGM byte stream (binary "P5" or ASCII "P2", maxval 1..255).
// Pixel values are copied verbatim; no maxval rescaling is applied.
inline GrayImage read_pgm(std::string_view data) {
    detail::PgmCursor cur{data};
    detail::skip_space_and_comments(cur);
    if (data.size() - cur.pos < 2 || data[cur.pos] != 'P') {
        throw PgmParseError("malformed header: missing PGM magic");
    }
    const char kind = data[cur.pos + 1];
    if (kind != '5' && kind != '2') {
        throw PgmParseError(std::string("malformed header: unsupported magic P") + kind +
                            " (expected P2 or P5)");
    }
    cur.pos += 2;
    if (!cur.eof() && !detail::is_pgm_space(cur.peek()) && cur.peek() != '#') {
        throw PgmParseError("malformed header: junk after magic");
    }

    const long long width = detail::next_uint(cur, "width");
    const long long height = detail::next_uint(cur, "height");
    const long long maxval = detail::next_uint(cur, "maxval");
    if (width == 0 || height == 0) {
        throw PgmParseError("zero image dimensions: " + std::to_string(width) + "x" +
                            std::to_string(height));
    }
    if (maxval > 255) {
        throw PgmParseError("unsupported maxval " + std::to_string(maxval) +
                            " (must be <= 255)");
    }
    if (maxval < 1) {
        throw PgmParseError("malformed header: maxval must be >= 1");
    }

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<std::uint8_t> pixels;
    pixels.reserve(count);

    if (kind == '5') {
        // Exactly one whitespace byte separates the header from the raster.
        if (cur.eof() || !detail::is_pgm_space(cur.peek())) {
            throw PgmParseError("malformed header: missing raster separator");
        }
        ++cur.pos;
        if (data.size() - cur.pos < count) {
            throw PgmParseError("truncated pixel payload: need " + std::to_string(count) +
                                " bytes, have " + std::to_string(data.size() - cur.pos));
        }
        for (std::size_t i = 0; i < count; ++i) {
            const auto v = static_cast<std::uint8_t>(data[cur.pos + i]);
            if (v > maxval) {
                throw PgmParseError("pixel value " + std::to_string(v) + " exceeds maxval " +
                                    std::to_string(maxval));
            }
            pixels.push_back(v);
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            detail::skip_space_and_comments(cur);
            if (cur.eof()) {
                throw PgmParseError("truncated pixel payload: got " + std::to_string(i) +
                                    " of " + std::to_string(count) + " values");
            }
            if (!std::isdigit(static_cast<unsigned char>(cur.peek()))) {
                throw PgmParseError("invalid pixel token at value " + std::to_string(i));
            }
            long long v = 0;
            while (!cur.eof() && std::isdigit(static_cast<unsigned char>(cur.peek()))) {
                v = v * 10 + (cur.peek() - '0');
                if (v > 100'000'000) throw PgmParseError("invalid pixel token: out of range");
                ++cur.pos;
            }
            if (v > maxval) {
                throw PgmParseError("pixel value " + std::to_string(v) + " exceeds maxval " +
                                    std::to_string(maxval));
            }
            pixels.push_back(static_cast<std::uint8_t>(v));
        }
    }
    return make_image(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

// Serializes as binary P5 with maxval 255.
inline std::string write_pgm(const GrayImage& img) {
    std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) +
                      "\n255\n";
    out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    return out;
}

inline GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path.string());
    return read_pgm(buf.str());
}

inline void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    const std::string bytes = write_pgm(img);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace gmmce
