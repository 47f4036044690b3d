#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "retina/image.hpp"

namespace retina {

/// Parameters for one synthetic retinal-style image. Grade only controls the
/// degradation (blur sigma and contrast factor); the rendered scene is a pure
/// function of the seed, so the same seed at different grades yields the same
/// anatomy under increasing blur.
struct SynthSpec {
    int grade = 1; // 1..4
    int side = 256;
    std::uint64_t seed = 0;
    std::array<double, 4> blur_sigma_by_grade{0.6, 2.0, 4.0, 8.0}; // at side 256
    std::array<double, 4> contrast_by_grade{1.0, 0.88, 0.76, 0.62};
    double blur_jitter = 0.0; // per-image sigma spread, fraction of the base
    int vessel_count = 5;
    double disc_radius = 18.0; // at side 256
    double background_level = 70.0;

    void validate() const;
};

struct LabeledImage {
    GrayImage image;
    int grade = 0;
    std::uint64_t seed = 0;
};

/// Renders one image: elliptical ROI on a zero background, bright optic
/// disc, branching vessel tree, mild texture; then grade-dependent Gaussian
/// blur and contrast reduction. Equal spec values render equal images.
GrayImage generate(const SynthSpec& spec);

/// per_class images per grade with per-image seeds derived from master_seed.
std::vector<LabeledImage> generate_dataset(int per_class, int side, std::uint64_t master_seed);

/// Writes dataset images ("g<grade>_<index>.<ext>", ext "pgm" or "png") plus
/// a manifest CSV "path,grade,seed" into dir. Returns the manifest path.
std::string write_dataset(const std::string& dir, const std::vector<LabeledImage>& dataset,
                          const std::string& format = "pgm");

/// Loads a dataset back from a manifest CSV.
std::vector<LabeledImage> read_manifest(const std::string& manifest_path);

/// Mean squared discrete 4-neighbour Laplacian; a simple sharpness proxy.
/// Stencils touching exact-zero pixels are skipped so the masked exterior
/// and its rim do not dominate the measure.
double laplacian_energy(const GrayImage& img);

} // namespace retina
