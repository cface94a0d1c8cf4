#include "goalforge/image.hpp"

#include "goalforge/error.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

namespace gf {

Image Image::filled(int h, int w, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    Image img;
    img.h = h;
    img.w = w;
    img.rgb.resize(static_cast<std::size_t>(h) * w * 3);
    for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
        img.rgb[i] = r;
        img.rgb[i + 1] = g;
        img.rgb[i + 2] = b;
    }
    return img;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

} // namespace

void write_png(const std::string& path, const Image& image) {
    if (image.h <= 0 || image.w <= 0 ||
        image.rgb.size() != static_cast<std::size_t>(image.h) * image.w * 3)
        throw Error(errc::bad_config, "write_png: image dims and buffer disagree");

    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw Error(errc::io, "cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error(errc::io, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(errc::io, "png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(errc::io, "png write failed: " + path);
    }

    png_init_io(png, fp.get());
    // pinned settings: byte-identical output is part of the determinism contract
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_NONE);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.w), static_cast<png_uint_32>(image.h),
                 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.h; ++y)
        png_write_row(png, const_cast<png_bytep>(image.pixel(y, 0)));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Image read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw Error(errc::io, "cannot open for reading: " + path);

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8) != 0)
        throw Error(errc::io, "not a PNG file: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error(errc::io, "png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw Error(errc::io, "png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(errc::io, "png read failed: " + path);
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    // normalize everything to 8-bit RGB
    png_byte color_type = png_get_color_type(png, info);
    png_byte bit_depth = png_get_bit_depth(png, info);
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    Image image;
    image.h = static_cast<int>(png_get_image_height(png, info));
    image.w = static_cast<int>(png_get_image_width(png, info));
    image.rgb.resize(static_cast<std::size_t>(image.h) * image.w * 3);
    if (png_get_rowbytes(png, info) != static_cast<std::size_t>(image.w) * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(errc::io, "unexpected PNG row size: " + path);
    }
    for (int y = 0; y < image.h; ++y) png_read_row(png, image.pixel(y, 0), nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

} // namespace gf
