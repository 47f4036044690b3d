#pragma once

#include <cstdint>
#include <vector>

#include "retina/image.hpp"

namespace retina {

/// Elliptical retinal region of interest. W = 2 * semi_major and
/// H = 2 * semi_minor for an axis-aligned fit.
struct RetinaROI {
    double center_x = 0.0;
    double center_y = 0.0;
    double semi_major = 0.0;
    double semi_minor = 0.0;
    double angle = 0.0; // orientation of the major axis, radians
    int width = 0;      // mask dimensions == source image dimensions
    int height = 0;
    std::vector<std::uint8_t> mask; // inside-ellipse flags, row-major

    bool inside(double x, double y) const;
    std::size_t mask_true_count() const;
};

/// Scrubs burned-in text from the top-left m/4 x n/2 region: pixels above
/// intensity_threshold are labeled, M is the mean of the 100 unlabeled pixels
/// nearest the labeled set's centroid, and labeled pixels are replaced by
/// uniform random values in [M-8, M+8] (clamped to [0,255]). Pixels outside
/// the region are never touched. Returns the input unchanged when the region
/// holds no pixel above the threshold.
GrayImage remove_personal_info(const GrayImage& img, double intensity_threshold,
                               std::uint64_t seed);

/// Thresholds the image, keeps the largest 8-connected foreground component,
/// and fits an ellipse to its boundary by direct least squares.
RetinaROI segment_roi(const GrayImage& img, double background_threshold);

/// Crops to the ROI bounding box and rescales the shorter axis so the box
/// becomes square with side N = max(W, H); pixels outside the ellipse are 0.
GrayImage square_normalize(const GrayImage& img, const RetinaROI& roi);

/// Direct least-squares ellipse fit (conic with the ellipse constraint).
/// Returns {A,B,C,D,E,F} of Ax^2+Bxy+Cy^2+Dx+Ey+F=0. Needs >= 5 points.
std::vector<double> fit_ellipse_conic(const std::vector<double>& xs,
                                      const std::vector<double>& ys);

} // namespace retina
