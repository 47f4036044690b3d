#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "retina/wavelet.hpp"

namespace retina {

/// Boolean coefficient grid obtained by thresholding a combined detail map.
struct BinaryMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryMap() = default;
    BinaryMap(int w, int h) : width(w), height(h) {
        bits.assign(static_cast<std::size_t>(w) * h, 0);
    }

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    std::size_t true_count() const;
};

constexpr int kRingCount = 20;

/// Per-ring foreground pixel counts; index 0 is the innermost ring, the last
/// ring also absorbs everything at or beyond the outer radius.
using FeatureVector = std::vector<long>;

/// bit = (value > threshold), strict. The map must be a combined detail map.
BinaryMap binarize(const DetailMap& detail, double threshold);

/// Deletes connected components with fewer than min_size pixels
/// (a component of exactly min_size pixels survives).
BinaryMap remove_small_components(const BinaryMap& bin, int min_size = 10,
                                  int connectivity = 8);

/// Bins the true pixels of a roughly square map into ring_count concentric
/// rings of equal width. With side S = min(width, height), the center is the
/// geometric grid center ((width-1)/2, (height-1)/2), the outer radius
/// R = S/2 and the ring width R/ring_count; a pixel at distance d lands in
/// ring min(floor(d / (R/ring_count)), ring_count - 1), and everything at
/// d >= R folds into the outermost ring.
FeatureVector annular_features(const BinaryMap& bin, int ring_count = kRingCount);

/// Number of grid pixels each ring would hold if the map were all-true.
/// These areas are the feature-scaling constants: dividing a count by its
/// ring area turns it into a density in [0, 1].
std::vector<double> ring_areas(int width, int height, int ring_count = kRingCount);

/// counts[k] / ring_area[k] for the map's own grid.
std::vector<double> scale_features(const FeatureVector& counts,
                                   const std::vector<double>& areas);

/// Full feature pipeline on a square-normalized image:
/// combined_detail -> binarize -> remove_small_components -> annular_features.
FeatureVector extract_features(const GrayImage& img, const KernelSpec& kernel,
                               double threshold, int ring_count = kRingCount,
                               int min_component = 10, int connectivity = 8);

/// Same pipeline from a precomputed combined detail map. Cascade training
/// sweeps 40 thresholds per image, so callers cache the map and reuse it.
FeatureVector features_from_detail(const DetailMap& detail, double threshold,
                                   int ring_count = kRingCount, int min_component = 10,
                                   int connectivity = 8);

/// CSV with header "mask_index,count" and one row per ring.
void write_feature_csv(const std::string& path, const FeatureVector& features);

} // namespace retina
