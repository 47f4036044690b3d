#include "retina/image.hpp"

#include <algorithm>
#include <cmath>

#include "retina/errors.hpp"
#include "retina/rng.hpp"

namespace retina {

namespace {

double clamp255(double v) { return std::max(0.0, std::min(255.0, v)); }

int clamp_index(int i, int n) { return std::max(0, std::min(n - 1, i)); }

} // namespace

GrayImage::GrayImage(int w, int h, double fill) : width(w), height(h) {
    if (w < 1 || h < 1) throw ParameterError("GrayImage: dimensions must be >= 1");
    pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

void GrayImage::validate() const {
    if (width < 1 || height < 1)
        throw ContractError("GrayImage: dimensions must be >= 1");
    if (pixels.size() != static_cast<std::size_t>(width) * height)
        throw ContractError("GrayImage: pixel count does not match dimensions");
    for (double v : pixels) {
        if (!std::isfinite(v) || v < 0.0 || v > 255.0)
            throw ContractError("GrayImage: intensity outside [0, 255]");
    }
}

void NoiseSpec::validate() const {
    if (!(density >= 0.0 && density <= 1.0))
        throw ParameterError("NoiseSpec: density must be in [0, 1]");
    if (!(sigma >= 0.0)) throw ParameterError("NoiseSpec: sigma must be >= 0");
    if (!std::isfinite(mean)) throw ParameterError("NoiseSpec: mean must be finite");
}

std::string NoiseSpec::kind_name() const {
    switch (kind) {
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::salt_pepper: return "salt_pepper";
        case NoiseKind::speckle: return "speckle";
    }
    return "unknown";
}

GrayImage extract_green(const RgbImage& rgb) {
    if (rgb.width < 1 || rgb.height < 1)
        throw InputFormatError("extract_green: empty image");
    if (rgb.pixels.size() != static_cast<std::size_t>(rgb.width) * rgb.height * 3)
        throw InputFormatError("extract_green: buffer is not 3-channel interleaved");
    GrayImage out(rgb.width, rgb.height);
    const std::size_t n = out.pixel_count();
    for (std::size_t i = 0; i < n; ++i) out.pixels[i] = rgb.pixels[i * 3 + 1];
    return out;
}

GrayImage median_filter(const GrayImage& img, int window) {
    img.validate();
    if (window < 1 || window % 2 == 0)
        throw ParameterError("median_filter: window must be odd and >= 1");
    if (window > std::min(img.width, img.height))
        throw ParameterError("median_filter: window larger than image");
    if (window == 1) return img;

    const int r = window / 2;
    GrayImage out(img.width, img.height);
    std::vector<double> buf(static_cast<std::size_t>(window) * window);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            std::size_t k = 0;
            for (int dy = -r; dy <= r; ++dy) {
                const int sy = clamp_index(y + dy, img.height);
                for (int dx = -r; dx <= r; ++dx) {
                    const int sx = clamp_index(x + dx, img.width);
                    buf[k++] = img.at(sx, sy);
                }
            }
            auto mid = buf.begin() + buf.size() / 2;
            std::nth_element(buf.begin(), mid, buf.end());
            out.at(x, y) = *mid;
        }
    }
    return out;
}

GrayImage resize(const GrayImage& img, int new_width, int new_height) {
    img.validate();
    if (new_width < 1 || new_height < 1)
        throw ParameterError("resize: dimensions must be >= 1");
    if (new_width == img.width && new_height == img.height) return img;

    GrayImage out(new_width, new_height);
    const double sx = new_width > 1 ? double(img.width - 1) / (new_width - 1) : 0.0;
    const double sy = new_height > 1 ? double(img.height - 1) / (new_height - 1) : 0.0;
    const double cx = new_width > 1 ? 0.0 : (img.width - 1) / 2.0;
    const double cy = new_height > 1 ? 0.0 : (img.height - 1) / 2.0;
    for (int y = 0; y < new_height; ++y) {
        const double fy = cy + sy * y;
        const int y0 = clamp_index(static_cast<int>(std::floor(fy)), img.height);
        const int y1 = clamp_index(y0 + 1, img.height);
        const double wy = fy - y0;
        for (int x = 0; x < new_width; ++x) {
            const double fx = cx + sx * x;
            const int x0 = clamp_index(static_cast<int>(std::floor(fx)), img.width);
            const int x1 = clamp_index(x0 + 1, img.width);
            const double wx = fx - x0;
            const double top = img.at(x0, y0) * (1.0 - wx) + img.at(x1, y0) * wx;
            const double bot = img.at(x0, y1) * (1.0 - wx) + img.at(x1, y1) * wx;
            out.at(x, y) = clamp255(top * (1.0 - wy) + bot * wy);
        }
    }
    return out;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
    img.validate();
    if (sigma <= 0.0) return img;

    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double& k : kernel) k /= sum;

    GrayImage tmp(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * img.at(clamp_index(x + i, img.width), y);
            tmp.at(x, y) = acc;
        }
    }
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * tmp.at(x, clamp_index(y + i, img.height));
            out.at(x, y) = clamp255(acc);
        }
    }
    return out;
}

GrayImage add_noise(const GrayImage& img, const NoiseSpec& spec) {
    img.validate();
    spec.validate();
    // zero-magnitude corruption leaves the image bit-identical
    if ((spec.kind == NoiseKind::gaussian && spec.mean == 0.0 && spec.sigma == 0.0) ||
        (spec.kind == NoiseKind::speckle && spec.sigma == 0.0) ||
        (spec.kind == NoiseKind::salt_pepper && spec.density == 0.0))
        return img;
    Rng rng(spec.seed);
    GrayImage out = img;

    switch (spec.kind) {
        case NoiseKind::gaussian: {
            for (double& v : out.pixels)
                v = clamp255((v / 255.0 + rng.gaussian(spec.mean, spec.sigma)) * 255.0);
            break;
        }
        case NoiseKind::speckle: {
            for (double& v : out.pixels)
                v = clamp255((v / 255.0) * (1.0 + rng.gaussian(0.0, spec.sigma)) * 255.0);
            break;
        }
        case NoiseKind::salt_pepper: {
            const std::size_t n = out.pixel_count();
            const std::size_t hits = static_cast<std::size_t>(spec.density * double(n));
            // partial Fisher-Yates picks exactly `hits` distinct pixels
            std::vector<std::uint32_t> idx(n);
            for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(i);
            for (std::size_t i = 0; i < hits; ++i) {
                std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(n - i));
                std::swap(idx[i], idx[j]);
                out.pixels[idx[i]] = (rng.uniform01() < 0.5) ? 0.0 : 255.0;
            }
            break;
        }
    }
    return out;
}

} // namespace retina
