#include "retina/preprocess.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "retina/errors.hpp"
#include "retina/labeling.hpp"
#include "retina/rng.hpp"

namespace retina {

bool RetinaROI::inside(double x, double y) const {
    const double dx = x - center_x;
    const double dy = y - center_y;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double u = dx * c + dy * s;
    const double v = -dx * s + dy * c;
    const double a = u / semi_major;
    const double b = v / semi_minor;
    return a * a + b * b <= 1.0;
}

std::size_t RetinaROI::mask_true_count() const {
    std::size_t c = 0;
    for (auto b : mask) c += b ? 1 : 0;
    return c;
}

GrayImage remove_personal_info(const GrayImage& img, double intensity_threshold,
                               std::uint64_t seed) {
    img.validate();
    if (img.width < 8 || img.height < 8)
        throw ParameterError("remove_personal_info: image must be at least 8x8");

    const int region_h = img.height / 4;
    const int region_w = img.width / 2;

    std::vector<std::size_t> labeled;
    for (int y = 0; y < region_h; ++y)
        for (int x = 0; x < region_w; ++x)
            if (img.at(x, y) > intensity_threshold)
                labeled.push_back(static_cast<std::size_t>(y) * img.width + x);
    if (labeled.empty()) return img;
    if (labeled.size() == static_cast<std::size_t>(region_h) * region_w)
        throw PreprocessError("remove_personal_info: labeled region covers the whole window");

    // centroid of the labeled set
    double cx = 0.0, cy = 0.0;
    for (std::size_t p : labeled) {
        cx += static_cast<double>(p % img.width);
        cy += static_cast<double>(p / img.width);
    }
    cx /= static_cast<double>(labeled.size());
    cy /= static_cast<double>(labeled.size());

    std::vector<std::uint8_t> is_labeled(img.pixel_count(), 0);
    for (std::size_t p : labeled) is_labeled[p] = 1;

    // the 100 unlabeled pixels nearest the centroid define the local mean M
    struct Cand {
        double d2;
        std::size_t idx;
    };
    std::vector<Cand> cands;
    cands.reserve(img.pixel_count() - labeled.size());
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        if (is_labeled[p]) continue;
        const double dx = static_cast<double>(p % img.width) - cx;
        const double dy = static_cast<double>(p / img.width) - cy;
        cands.push_back({dx * dx + dy * dy, p});
    }
    const std::size_t take = std::min<std::size_t>(100, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + take, cands.end(),
                      [](const Cand& a, const Cand& b) {
                          return a.d2 != b.d2 ? a.d2 < b.d2 : a.idx < b.idx;
                      });
    double mean = 0.0;
    for (std::size_t i = 0; i < take; ++i) mean += img.pixels[cands[i].idx];
    mean /= static_cast<double>(take);

    GrayImage out = img;
    Rng rng(seed);
    for (std::size_t p : labeled)
        out.pixels[p] = std::max(0.0, std::min(255.0, rng.uniform(mean - 8.0, mean + 8.0)));
    return out;
}

std::vector<double> fit_ellipse_conic(const std::vector<double>& xs,
                                      const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n != ys.size() || n < 5)
        throw SegmentationError("fit_ellipse_conic: need at least 5 points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    Eigen::MatrixXd d1(n, 3), d2(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = xs[i] - mx;
        const double y = ys[i] - my;
        d1(static_cast<Eigen::Index>(i), 0) = x * x;
        d1(static_cast<Eigen::Index>(i), 1) = x * y;
        d1(static_cast<Eigen::Index>(i), 2) = y * y;
        d2(static_cast<Eigen::Index>(i), 0) = x;
        d2(static_cast<Eigen::Index>(i), 1) = y;
        d2(static_cast<Eigen::Index>(i), 2) = 1.0;
    }

    const Eigen::Matrix3d s1 = d1.transpose() * d1;
    const Eigen::Matrix3d s2 = d1.transpose() * d2;
    const Eigen::Matrix3d s3 = d2.transpose() * d2;
    if (std::fabs(s3.determinant()) < 1e-12)
        throw SegmentationError("fit_ellipse_conic: degenerate point set");
    const Eigen::Matrix3d t = -s3.inverse() * s2.transpose();
    const Eigen::Matrix3d m_full = s1 + s2 * t;

    Eigen::Matrix3d m;
    m.row(0) = m_full.row(2) / 2.0;
    m.row(1) = -m_full.row(1);
    m.row(2) = m_full.row(0) / 2.0;

    Eigen::EigenSolver<Eigen::Matrix3d> solver(m);
    if (solver.info() != Eigen::Success)
        throw SegmentationError("fit_ellipse_conic: eigensolver failed");

    Eigen::Vector3d a1 = Eigen::Vector3d::Zero();
    bool found = false;
    for (int k = 0; k < 3; ++k) {
        const Eigen::Vector3d v = solver.eigenvectors().col(k).real();
        const double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
        if (cond > 0.0 && std::isfinite(cond)) {
            a1 = v;
            found = true;
            break;
        }
    }
    if (!found) throw SegmentationError("fit_ellipse_conic: no ellipse solution (collinear points?)");
    const Eigen::Vector3d a2 = t * a1;

    // undo the centering substitution x -> x - mx, y -> y - my
    const double A = a1(0), B = a1(1), C = a1(2);
    const double D = a2(0), E = a2(1), F = a2(2);
    std::vector<double> conic(6);
    conic[0] = A;
    conic[1] = B;
    conic[2] = C;
    conic[3] = -2.0 * A * mx - B * my + D;
    conic[4] = -B * mx - 2.0 * C * my + E;
    conic[5] = A * mx * mx + B * mx * my + C * my * my - D * mx - E * my + F;
    return conic;
}

namespace {

RetinaROI conic_to_roi(const std::vector<double>& conic, int width, int height) {
    double A = conic[0], B = conic[1], C = conic[2];
    double D = conic[3], E = conic[4], F = conic[5];
    if (A + C < 0.0) { // normalize so the quadratic form is positive definite
        A = -A; B = -B; C = -C; D = -D; E = -E; F = -F;
    }
    const double den = 4.0 * A * C - B * B;
    if (!(den > 0.0)) throw SegmentationError("segment_roi: fitted conic is not an ellipse");

    RetinaROI roi;
    roi.center_x = (B * E - 2.0 * C * D) / den;
    roi.center_y = (B * D - 2.0 * A * E) / den;

    const double mu = A * roi.center_x * roi.center_x + B * roi.center_x * roi.center_y +
                      C * roi.center_y * roi.center_y + D * roi.center_x + E * roi.center_y + F;
    if (!(mu < 0.0)) throw SegmentationError("segment_roi: degenerate ellipse");

    // eigenvalues of [[A, B/2], [B/2, C]]
    const double half_tr = (A + C) / 2.0;
    const double s = std::sqrt((A - C) * (A - C) / 4.0 + B * B / 4.0);
    const double lam_small = half_tr - s;
    const double lam_big = half_tr + s;
    if (!(lam_small > 0.0)) throw SegmentationError("segment_roi: degenerate ellipse axes");

    roi.semi_major = std::sqrt(-mu / lam_small);
    roi.semi_minor = std::sqrt(-mu / lam_big);

    // major-axis direction = eigenvector of the smaller eigenvalue
    double vx, vy;
    if (std::fabs(B) > 1e-14) {
        vx = B / 2.0;
        vy = lam_small - A;
    } else if (A <= C) {
        vx = 1.0;
        vy = 0.0;
    } else {
        vx = 0.0;
        vy = 1.0;
    }
    roi.angle = std::atan2(vy, vx);
    if (roi.angle > 1.5707963267948966) roi.angle -= 3.141592653589793;
    if (roi.angle <= -1.5707963267948966) roi.angle += 3.141592653589793;

    roi.width = width;
    roi.height = height;
    roi.mask.assign(static_cast<std::size_t>(width) * height, 0);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (roi.inside(x, y)) roi.mask[static_cast<std::size_t>(y) * width + x] = 1;
    if (roi.mask_true_count() == 0)
        throw SegmentationError("segment_roi: fitted ellipse misses the image");
    return roi;
}

} // namespace

RetinaROI segment_roi(const GrayImage& img, double background_threshold) {
    img.validate();
    std::vector<std::uint8_t> fg(img.pixel_count(), 0);
    for (std::size_t i = 0; i < img.pixel_count(); ++i)
        fg[i] = img.pixels[i] > background_threshold ? 1 : 0;

    std::vector<int> labels;
    const int count = label_components(fg, img.width, img.height, 8, labels);
    if (count == 0) throw SegmentationError("segment_roi: no foreground above threshold");
    const auto sizes = component_sizes(labels, count);
    int best = 1;
    for (int l = 2; l <= count; ++l)
        if (sizes[static_cast<std::size_t>(l)] > sizes[static_cast<std::size_t>(best)]) best = l;

    // boundary = component pixels with a 4-neighbour outside the component
    std::vector<double> bx, by;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * img.width + x;
            if (labels[p] != best) continue;
            bool edge = x == 0 || x == img.width - 1 || y == 0 || y == img.height - 1;
            if (!edge) {
                edge = labels[p - 1] != best || labels[p + 1] != best ||
                       labels[p - img.width] != best || labels[p + img.width] != best;
            }
            if (edge) {
                bx.push_back(x);
                by.push_back(y);
            }
        }
    }
    if (bx.size() < 5)
        throw SegmentationError("segment_roi: fewer than 5 boundary points");
    return conic_to_roi(fit_ellipse_conic(bx, by), img.width, img.height);
}

GrayImage square_normalize(const GrayImage& img, const RetinaROI& roi) {
    img.validate();
    if (roi.width != img.width || roi.height != img.height)
        throw ContractError("square_normalize: ROI mask does not match the image");

    int x_min = img.width, x_max = -1, y_min = img.height, y_max = -1;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (!roi.mask[static_cast<std::size_t>(y) * img.width + x]) continue;
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (x_max < x_min || y_max < y_min)
        throw PreprocessError("square_normalize: empty ROI bounding box");

    const int box_w = x_max - x_min + 1;
    const int box_h = y_max - y_min + 1;
    const int side = std::max(box_w, box_h);

    GrayImage out(side, side);
    const double sx = side > 1 ? double(box_w - 1) / (side - 1) : 0.0;
    const double sy = side > 1 ? double(box_h - 1) / (side - 1) : 0.0;
    for (int oy = 0; oy < side; ++oy) {
        const double fy = y_min + sy * oy;
        for (int ox = 0; ox < side; ++ox) {
            const double fx = x_min + sx * ox;
            if (!roi.inside(fx, fy)) continue; // stays 0
            const int x0 = std::max(0, std::min(img.width - 1, static_cast<int>(std::floor(fx))));
            const int y0 = std::max(0, std::min(img.height - 1, static_cast<int>(std::floor(fy))));
            const int x1 = std::min(img.width - 1, x0 + 1);
            const int y1 = std::min(img.height - 1, y0 + 1);
            const double wx = fx - x0;
            const double wy = fy - y0;
            const double top = img.at(x0, y0) * (1.0 - wx) + img.at(x1, y0) * wx;
            const double bot = img.at(x0, y1) * (1.0 - wx) + img.at(x1, y1) * wx;
            out.at(ox, oy) = top * (1.0 - wy) + bot * wy;
        }
    }
    return out;
}

} // namespace retina
