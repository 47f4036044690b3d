#include "retina/features.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "retina/errors.hpp"
#include "retina/labeling.hpp"

namespace retina {

std::size_t BinaryMap::true_count() const {
    std::size_t c = 0;
    for (auto b : bits) c += b ? 1 : 0;
    return c;
}

BinaryMap binarize(const DetailMap& detail, double threshold) {
    if (detail.direction != Direction::combined)
        throw ContractError("binarize: expected a combined detail map");
    if (threshold < 0.0) throw ParameterError("binarize: threshold must be >= 0");
    BinaryMap out(detail.width, detail.height);
    for (std::size_t i = 0; i < detail.values.size(); ++i)
        out.bits[i] = detail.values[i] > threshold ? 1 : 0;
    return out;
}

BinaryMap remove_small_components(const BinaryMap& bin, int min_size, int connectivity) {
    std::vector<int> labels;
    const int count = label_components(bin.bits, bin.width, bin.height, connectivity, labels);
    const auto sizes = component_sizes(labels, count);
    BinaryMap out(bin.width, bin.height);
    for (std::size_t i = 0; i < bin.bits.size(); ++i) {
        const int l = labels[i];
        out.bits[i] = (l > 0 && sizes[static_cast<std::size_t>(l)] >= static_cast<std::size_t>(min_size)) ? 1 : 0;
    }
    return out;
}

namespace {

int ring_of(int x, int y, int width, int height, int ring_count) {
    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;
    const double side = std::min(width, height);
    const double outer = side / 2.0;
    const double ring_width = outer / ring_count;
    const double d = std::hypot(x - cx, y - cy);
    if (d >= outer) return ring_count - 1;
    int k = static_cast<int>(d / ring_width);
    return k >= ring_count ? ring_count - 1 : k;
}

} // namespace

FeatureVector annular_features(const BinaryMap& bin, int ring_count) {
    if (ring_count < 1) throw ParameterError("annular_features: ring_count must be >= 1");
    if (std::abs(bin.width - bin.height) > 1)
        throw ContractError("annular_features: map must be roughly square");
    FeatureVector counts(static_cast<std::size_t>(ring_count), 0);
    for (int y = 0; y < bin.height; ++y)
        for (int x = 0; x < bin.width; ++x)
            if (bin.at(x, y)) ++counts[static_cast<std::size_t>(ring_of(x, y, bin.width, bin.height, ring_count))];
    return counts;
}

std::vector<double> ring_areas(int width, int height, int ring_count) {
    if (ring_count < 1) throw ParameterError("ring_areas: ring_count must be >= 1");
    std::vector<double> areas(static_cast<std::size_t>(ring_count), 0.0);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            areas[static_cast<std::size_t>(ring_of(x, y, width, height, ring_count))] += 1.0;
    return areas;
}

std::vector<double> scale_features(const FeatureVector& counts, const std::vector<double>& areas) {
    if (counts.size() != areas.size())
        throw ContractError("scale_features: size mismatch");
    std::vector<double> scaled(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        scaled[i] = areas[i] > 0.0 ? static_cast<double>(counts[i]) / areas[i] : 0.0;
    return scaled;
}

FeatureVector extract_features(const GrayImage& img, const KernelSpec& kernel, double threshold,
                               int ring_count, int min_component, int connectivity) {
    return features_from_detail(combined_detail(img, kernel), threshold, ring_count,
                                min_component, connectivity);
}

FeatureVector features_from_detail(const DetailMap& detail, double threshold, int ring_count,
                                   int min_component, int connectivity) {
    BinaryMap bin = binarize(detail, threshold);
    bin = remove_small_components(bin, min_component, connectivity);
    return annular_features(bin, ring_count);
}

void write_feature_csv(const std::string& path, const FeatureVector& features) {
    std::ofstream out(path);
    if (!out) throw IoError("write_feature_csv: cannot open " + path);
    out << "mask_index,count\n";
    for (std::size_t i = 0; i < features.size(); ++i)
        out << (i + 1) << "," << features[i] << "\n";
    if (!out) throw IoError("write_feature_csv: write failed for " + path);
}

} // namespace retina
