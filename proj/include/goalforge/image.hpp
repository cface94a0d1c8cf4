#pragma once

/// @file image.hpp
/// 8-bit RGB images and PNG round-trips. Encoding settings are pinned
/// (no interlace, fixed filter and compression level) so regenerated
/// datasets are byte-identical.

#include <cstdint>
#include <string>
#include <vector>

namespace gf {

struct Image {
    int h = 0;
    int w = 0;
    std::vector<std::uint8_t> rgb; // interleaved, row-major, 3 bytes per pixel

    static Image filled(int h, int w, std::uint8_t r, std::uint8_t g, std::uint8_t b);

    std::uint8_t* pixel(int y, int x) { return rgb.data() + 3 * (static_cast<std::size_t>(y) * w + x); }
    const std::uint8_t* pixel(int y, int x) const {
        return rgb.data() + 3 * (static_cast<std::size_t>(y) * w + x);
    }
};

void write_png(const std::string& path, const Image& image);
Image read_png(const std::string& path);

} // namespace gf
