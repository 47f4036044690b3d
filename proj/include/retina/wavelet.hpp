#pragma once

#include <string>
#include <vector>

#include "retina/image.hpp"

namespace retina {

/// Generalized Haar analysis pair of half-width n.
///
/// The highpass kernel carries n taps of +1/c followed by n taps of -1/c,
/// the lowpass 2n taps of +1/c, with c = sqrt(2n) so that both kernels have
/// unit energy. n = 1 reproduces the classic Haar pair {1/sqrt2, -1/sqrt2}
/// and {1/sqrt2, 1/sqrt2}; wider kernels pool more neighbours per
/// coefficient, which lifts the detail contrast of low-contrast images.
struct KernelSpec {
    int half_width = 1;
    double coefficient = 0.0;
    std::vector<double> highpass;
    std::vector<double> lowpass;
};

KernelSpec make_kernel(int half_width);

enum class Direction { horizontal, vertical, diagonal, combined, approximate };

/// Real-valued wavelet coefficient grid. Combined maps (sum of absolute
/// directional details) are non-negative; single directions may be negative.
struct DetailMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    Direction direction = Direction::combined;

    DetailMap() = default;
    DetailMap(int w, int h, Direction dir);

    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// One decomposition level of a 2D signal.
struct Decomposition {
    DetailMap approx;     // low rows, low columns
    DetailMap horizontal; // low rows, high columns
    DetailMap vertical;   // high rows, low columns
    DetailMap diagonal;   // high rows, high columns
};

/// One level of 1D analysis. Windows of width 2n slide with stride 2 over a
/// symmetrically padded signal (n-1 samples mirrored per side, edge sample
/// included), so the output length is exactly len/2 for every n.
/// The signal length must be even and >= 2.
void decompose_1d(const std::vector<double>& signal, const KernelSpec& kernel,
                  std::vector<double>& approx, std::vector<double>& detail);

/// Separable one-level 2D analysis: rows first, then columns. Each output
/// component is (width/2) x (height/2); both input dimensions must be even.
/// With n = 1 this is exactly one-layer Haar.
Decomposition decompose_2d(const GrayImage& img, const KernelSpec& kernel);

/// |DC_h| + |DC_v| + |DC_d| per coefficient.
DetailMap combined_detail(const GrayImage& img, const KernelSpec& kernel);

struct DetailTriple {
    DetailMap horizontal;
    DetailMap vertical;
    DetailMap diagonal;
};

/// Classic multilayer Haar (n = 1): re-decomposes successive approximations.
/// Layer k details have side input_side / 2^k; dimensions must divide 2^layers.
std::vector<DetailTriple> multilayer_haar(const GrayImage& img, int layers);

/// Sum of absolute directional details of one layer.
DetailMap combine_triple(const DetailTriple& t);

/// Row-major CSV dump with 6 significant digits, for plotting and debugging.
void write_detail_csv(const std::string& path, const DetailMap& map);

} // namespace retina
