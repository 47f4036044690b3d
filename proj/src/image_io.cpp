#include "retina/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "retina/errors.hpp"

namespace retina {

namespace {

std::uint8_t to_byte(double v) {
    const double r = std::nearbyint(v);
    return static_cast<std::uint8_t>(std::max(0.0, std::min(255.0, r)));
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

} // namespace

void write_pgm(const std::string& path, const GrayImage& img) {
    img.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_pgm: cannot open " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<std::uint8_t> row(img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) row[x] = to_byte(img.at(x, y));
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!out) throw IoError("write_pgm: write failed for " + path);
}

GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_pgm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5") throw InputFormatError("read_pgm: not a binary PGM: " + path);

    auto next_token = [&in, &path]() {
        // skips whitespace and '#' comment lines
        for (;;) {
            int c = in.peek();
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
            if (!in) throw InputFormatError("read_pgm: truncated header: " + path);
        }
        long v;
        in >> v;
        if (!in) throw InputFormatError("read_pgm: bad header value: " + path);
        return v;
    };

    const long w = next_token();
    const long h = next_token();
    const long maxval = next_token();
    if (w < 1 || h < 1 || maxval != 255)
        throw InputFormatError("read_pgm: unsupported dimensions or maxval: " + path);
    in.get(); // single whitespace before raster

    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    std::vector<std::uint8_t> raster(img.pixel_count());
    in.read(reinterpret_cast<char*>(raster.data()), raster.size());
    if (static_cast<std::size_t>(in.gcount()) != raster.size())
        throw InputFormatError("read_pgm: truncated raster: " + path);
    for (std::size_t i = 0; i < raster.size(); ++i) img.pixels[i] = raster[i];
    return img;
}

void write_png(const std::string& path, const GrayImage& img) {
    img.validate();
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("write_png: cannot open " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("write_png: png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("write_png: png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("write_png: libpng error while writing " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<std::uint8_t> row(img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) row[x] = to_byte(img.at(x, y));
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

GrayImage read_png_gray(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("read_png_gray: cannot open " + path);

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
        throw InputFormatError("read_png_gray: not a PNG: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("read_png_gray: png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("read_png_gray: png_create_info_struct failed");
    }
    std::vector<std::uint8_t> data;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw InputFormatError("read_png_gray: libpng error while reading " + path);
    }
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_packing(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY &&
        png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const png_byte channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw InputFormatError("read_png_gray: unsupported channel count in " + path);
    }

    const std::size_t stride = static_cast<std::size_t>(w) * channels;
    data.resize(stride * h);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = data.data() + y * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (channels == 1) {
        GrayImage img(static_cast<int>(w), static_cast<int>(h));
        for (std::size_t i = 0; i < img.pixel_count(); ++i) img.pixels[i] = data[i];
        return img;
    }
    RgbImage rgb;
    rgb.width = static_cast<int>(w);
    rgb.height = static_cast<int>(h);
    rgb.pixels.assign(data.begin(), data.end());
    return extract_green(rgb);
}

GrayImage load_gray(const std::string& path) {
    const auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == "pgm") return read_pgm(path);
    if (ext == "png") return read_png_gray(path);
    throw InputFormatError("load_gray: unsupported image format: " + path);
}

} // namespace retina
