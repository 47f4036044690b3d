#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace retina {

/// 2D intensity grid on the 0-255 scale, stored row-major as doubles.
/// The universal pixel carrier for every stage of the pipeline.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0);

    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return pixels.size(); }

    /// Throws ContractError if dimensions, pixel count, or value range are invalid.
    void validate() const;
};

/// 3-channel interleaved RGB image, 0-255 per channel.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels; // r,g,b interleaved, row-major

    double channel(int x, int y, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }
};

enum class NoiseKind { gaussian, salt_pepper, speckle };

/// Parameters for add_noise. mean and sigma are expressed on the normalized
/// [0,1] intensity scale; density is the fraction of pixels hit by
/// salt-and-pepper corruption.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::gaussian;
    double mean = 0.0;
    double sigma = 0.0;
    double density = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
    std::string kind_name() const;
};

/// Copies the green channel out of an RGB image.
GrayImage extract_green(const RgbImage& rgb);

/// Median filter with an odd square window; borders use edge replication.
GrayImage median_filter(const GrayImage& img, int window = 3);

/// Bilinear resize (corner-aligned sampling). Output stays within [0, 255].
GrayImage resize(const GrayImage& img, int new_width, int new_height);

/// Separable Gaussian blur with edge-replicated borders. sigma <= 0 is a copy.
GrayImage gaussian_blur(const GrayImage& img, double sigma);

/// Corrupts an image according to spec. Deterministic for a fixed seed.
///   gaussian:    out = in/255 + N(mean, sigma^2), rescaled and clamped
///   speckle:     out = in/255 * (1 + N(0, sigma^2)), rescaled and clamped
///   salt_pepper: exactly floor(density * pixel_count) distinct pixels set
///                to 0 or 255 with equal probability
GrayImage add_noise(const GrayImage& img, const NoiseSpec& spec);

} // namespace retina
