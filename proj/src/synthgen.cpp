#include "retina/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "retina/errors.hpp"
#include "retina/image_io.hpp"
#include "retina/rng.hpp"

namespace retina {

void SynthSpec::validate() const {
    if (grade < 1 || grade > 4) throw ParameterError("SynthSpec: grade must be 1..4");
    if (side < 16 || side % 8 != 0)
        throw ParameterError("SynthSpec: side must be >= 16 and divisible by 8");
    if (blur_jitter < 0.0 || blur_jitter >= 1.0)
        throw ParameterError("SynthSpec: blur_jitter must be in [0, 1)");
    for (int g = 1; g < 4; ++g) {
        const double lo = blur_sigma_by_grade[g] * (1.0 - blur_jitter);
        const double hi = blur_sigma_by_grade[g - 1] * (1.0 + blur_jitter);
        if (!(lo > hi))
            throw ParameterError(
                "SynthSpec: blur sigma ranges must increase strictly with grade");
    }
    if (vessel_count < 1) throw ParameterError("SynthSpec: vessel_count must be >= 1");
    if (!(disc_radius > 0.0)) throw ParameterError("SynthSpec: disc_radius must be > 0");
    if (background_level < 1.0 || background_level > 200.0)
        throw ParameterError("SynthSpec: background_level out of range");
}

namespace {

struct Scene {
    double cx, cy;     // ROI center
    double a, b;       // ROI semi-axes (a >= b, major axis horizontal)
    double disc_x, disc_y, disc_r;
};

bool inside_ellipse(const Scene& s, double x, double y) {
    const double u = (x - s.cx) / s.a;
    const double v = (y - s.cy) / s.b;
    return u * u + v * v <= 1.0;
}

// stamp a darkening disc, keeping the max darkness where stamps overlap
void stamp(std::vector<double>& darkness, int side, double x, double y, double radius,
           double amount) {
    const int x0 = std::max(0, static_cast<int>(std::floor(x - radius)));
    const int x1 = std::min(side - 1, static_cast<int>(std::ceil(x + radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(y - radius)));
    const int y1 = std::min(side - 1, static_cast<int>(std::ceil(y + radius)));
    const double r2 = radius * radius;
    for (int py = y0; py <= y1; ++py) {
        for (int px = x0; px <= x1; ++px) {
            const double dx = px - x;
            const double dy = py - y;
            if (dx * dx + dy * dy > r2) continue;
            double& d = darkness[static_cast<std::size_t>(py) * side + px];
            d = std::max(d, amount);
        }
    }
}

void draw_branch(std::vector<double>& darkness, int side, Rng& rng, const Scene& scene,
                 double x, double y, double angle, double width, double contrast, int depth) {
    const double length = scene.a * rng.uniform(0.22, 0.42) * std::pow(0.75, depth);
    const double amount = contrast * std::pow(0.82, depth);
    const int steps = std::max(2, static_cast<int>(length));
    for (int i = 0; i < steps; ++i) {
        angle += rng.uniform(-0.22, 0.22);
        x += std::cos(angle);
        y += std::sin(angle);
        stamp(darkness, side, x, y, width / 2.0, amount);
    }
    if (depth < 3 && width > 1.0) {
        const double spread = rng.uniform(0.25, 0.65);
        draw_branch(darkness, side, rng, scene, x, y, angle - spread, width * 0.72, contrast,
                    depth + 1);
        draw_branch(darkness, side, rng, scene, x, y, angle + spread, width * 0.72, contrast,
                    depth + 1);
    }
}

} // namespace

GrayImage generate(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const int side = spec.side;
    const double scale = side / 256.0;

    Scene scene;
    scene.cx = side / 2.0 + rng.uniform(-2.0, 2.0) * scale;
    scene.cy = side / 2.0 + rng.uniform(-2.0, 2.0) * scale;
    scene.a = side * rng.uniform(0.455, 0.475);
    scene.b = scene.a * rng.uniform(0.90, 0.96);

    // base level plus gratings: three slow ones for shading, two fine ones
    // whose survival under the grade blur carries most of the texture signal
    GrayImage canvas(side, side, spec.background_level);
    const int coarse = 3, fine = 2;
    for (int g = 0; g < coarse + fine; ++g) {
        const double amp = g < coarse ? rng.uniform(2.0, 5.0) : rng.uniform(5.0, 8.0);
        const double theta = rng.uniform(0.0, 6.283185307179586);
        const double freq = g < coarse ? rng.uniform(2.0, 5.0) : rng.uniform(18.0, 26.0);
        const double phase = rng.uniform(0.0, 6.283185307179586);
        const double fx = std::cos(theta) * freq / side;
        const double fy = std::sin(theta) * freq / side;
        for (int y = 0; y < side; ++y)
            for (int x = 0; x < side; ++x)
                canvas.at(x, y) += amp * std::cos(6.283185307179586 * (fx * x + fy * y) + phase);
    }

    // optic disc: bright ellipse offset toward one side
    const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    scene.disc_x = scene.cx + sign * scene.a * rng.uniform(0.35, 0.50);
    scene.disc_y = scene.cy + scene.b * rng.uniform(-0.15, 0.15);
    scene.disc_r = spec.disc_radius * scale * rng.uniform(0.9, 1.1);
    const double disc_boost = rng.uniform(85.0, 110.0);
    {
        const int x0 = std::max(0, static_cast<int>(scene.disc_x - scene.disc_r - 2));
        const int x1 = std::min(side - 1, static_cast<int>(scene.disc_x + scene.disc_r + 2));
        const int y0 = std::max(0, static_cast<int>(scene.disc_y - scene.disc_r - 2));
        const int y1 = std::min(side - 1, static_cast<int>(scene.disc_y + scene.disc_r + 2));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double r = std::hypot(x - scene.disc_x, y - scene.disc_y) / scene.disc_r;
                if (r < 1.0) canvas.at(x, y) += disc_boost * (1.0 - r * r * r * r);
            }
        }
    }

    // vessel tree growing out of the disc
    std::vector<double> darkness(canvas.pixel_count(), 0.0);
    const double vessel_contrast = rng.uniform(22.0, 25.0);
    const double toward_center = std::atan2(scene.cy - scene.disc_y, scene.cx - scene.disc_x);
    for (int v = 0; v < spec.vessel_count; ++v) {
        const double fan = rng.uniform(-1.25, 1.25);
        draw_branch(darkness, side, rng, scene, scene.disc_x, scene.disc_y, toward_center + fan,
                    3.5 * scale, vessel_contrast, 0);
    }
    for (std::size_t i = 0; i < canvas.pixel_count(); ++i) canvas.pixels[i] -= darkness[i];

    // scattered drusen-like bright dots a couple of pixels across
    const int dot_count = 30 + static_cast<int>(rng.uniform(0.0, 20.0));
    for (int d = 0; d < dot_count; ++d) {
        const double ang = rng.uniform(0.0, 6.283185307179586);
        const double rad = std::sqrt(rng.uniform01());
        const double dx = scene.cx + 0.9 * scene.a * rad * std::cos(ang);
        const double dy = scene.cy + 0.9 * scene.b * rad * std::sin(ang);
        const double dot_r = rng.uniform(1.6, 2.4) * scale;
        const double dot_amp = rng.uniform(12.0, 16.0);
        const int x0 = std::max(0, static_cast<int>(dx - dot_r - 1));
        const int x1 = std::min(side - 1, static_cast<int>(dx + dot_r + 1));
        const int y0 = std::max(0, static_cast<int>(dy - dot_r - 1));
        const int y1 = std::min(side - 1, static_cast<int>(dy + dot_r + 1));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double r = std::hypot(x - dx, y - dy) / dot_r;
                if (r < 1.0) canvas.at(x, y) += dot_amp * (1.0 - r * r) * (1.0 - r * r);
            }
        }
    }

    // fine texture that the grade blur progressively erases
    for (double& v : canvas.pixels) v += rng.uniform(-4.0, 4.0);
    for (double& v : canvas.pixels) v = std::max(0.0, std::min(255.0, v));

    // severity position within the grade's sigma range; drawn with the
    // anatomy so a fixed seed keeps sigma ordered across grades
    const double severity = rng.uniform01();

    // grade-dependent degradation
    const double base = spec.blur_sigma_by_grade[static_cast<std::size_t>(spec.grade - 1)];
    const double sigma =
        base * (1.0 + spec.blur_jitter * (2.0 * severity - 1.0)) * scale;
    GrayImage out = gaussian_blur(canvas, sigma);
    const double contrast = spec.contrast_by_grade[static_cast<std::size_t>(spec.grade - 1)];
    for (double& v : out.pixels)
        v = std::max(0.0, std::min(255.0, spec.background_level + (v - spec.background_level) * contrast));

    // everything outside the ROI ellipse is exactly 0
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
            if (!inside_ellipse(scene, x, y)) out.at(x, y) = 0.0;
    return out;
}

std::vector<LabeledImage> generate_dataset(int per_class, int side, std::uint64_t master_seed) {
    if (per_class < 1) throw ParameterError("generate_dataset: per_class must be >= 1");
    std::vector<LabeledImage> out;
    out.reserve(static_cast<std::size_t>(per_class) * 4);
    for (int grade = 1; grade <= 4; ++grade) {
        for (int i = 0; i < per_class; ++i) {
            SynthSpec spec;
            spec.grade = grade;
            spec.side = side;
            spec.seed = derive_seed(master_seed, static_cast<std::uint64_t>(grade),
                                    static_cast<std::uint64_t>(i));
            out.push_back({generate(spec), grade, spec.seed});
        }
    }
    return out;
}

std::string write_dataset(const std::string& dir, const std::vector<LabeledImage>& dataset,
                          const std::string& format) {
    if (format != "pgm" && format != "png")
        throw ParameterError("write_dataset: format must be pgm or png");
    std::filesystem::path root(dir);
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) throw IoError("write_dataset: cannot create directory " + dir);

    const std::string manifest_path = (root / "manifest.csv").string();
    std::ofstream manifest(manifest_path);
    if (!manifest) throw IoError("write_dataset: cannot open " + manifest_path);
    manifest << "path,grade,seed\n";
    std::vector<int> counter(5, 0);
    for (const LabeledImage& item : dataset) {
        std::ostringstream name;
        name << "g" << item.grade << "_" << counter[static_cast<std::size_t>(item.grade)]++
             << "." << format;
        const std::string path = (root / name.str()).string();
        if (format == "pgm")
            write_pgm(path, item.image);
        else
            write_png(path, item.image);
        manifest << name.str() << "," << item.grade << "," << item.seed << "\n";
    }
    if (!manifest) throw IoError("write_dataset: write failed for " + manifest_path);
    return manifest_path;
}

std::vector<LabeledImage> read_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("read_manifest: cannot open " + manifest_path);
    const std::filesystem::path root = std::filesystem::path(manifest_path).parent_path();

    std::string line;
    if (!std::getline(in, line) || line.rfind("path,grade,seed", 0) != 0)
        throw InputFormatError("read_manifest: missing header in " + manifest_path);

    std::vector<LabeledImage> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string path_field, grade_field, seed_field;
        if (!std::getline(ss, path_field, ',') || !std::getline(ss, grade_field, ',') ||
            !std::getline(ss, seed_field, ','))
            throw InputFormatError("read_manifest: bad row: " + line);
        LabeledImage item;
        item.grade = std::stoi(grade_field);
        item.seed = std::stoull(seed_field);
        if (item.grade < 1 || item.grade > 4)
            throw InputFormatError("read_manifest: grade out of range in row: " + line);
        std::filesystem::path img_path(path_field);
        if (img_path.is_relative()) img_path = root / img_path;
        item.image = load_gray(img_path.string());
        out.push_back(std::move(item));
    }
    return out;
}

double laplacian_energy(const GrayImage& img) {
    double acc = 0.0;
    std::size_t count = 0;
    for (int y = 1; y + 1 < img.height; ++y) {
        for (int x = 1; x + 1 < img.width; ++x) {
            const double c = img.at(x, y);
            const double l = img.at(x - 1, y), r = img.at(x + 1, y);
            const double u = img.at(x, y - 1), d = img.at(x, y + 1);
            // stencils touching the zeroed exterior would measure the mask
            // edge, not image sharpness
            if (c == 0.0 || l == 0.0 || r == 0.0 || u == 0.0 || d == 0.0) continue;
            const double lap = l + r + u + d - 4.0 * c;
            acc += lap * lap;
            ++count;
        }
    }
    return count > 0 ? acc / static_cast<double>(count) : 0.0;
}

} // namespace retina
