#include "retina/wavelet.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "retina/errors.hpp"

namespace retina {

namespace {

// symmetric extension, edge sample included: -1 -> 0, -2 -> 1, len -> len-1
int mirror(int i, int len) {
    if (i < 0) i = -i - 1;
    if (i >= len) i = 2 * len - i - 1;
    return i;
}

void analyze(const double* signal, int len, const KernelSpec& kernel,
             double* approx, double* detail) {
    const int n = kernel.half_width;
    const int width = 2 * n;
    const int half = len / 2;
    for (int k = 0; k < half; ++k) {
        const int start = 2 * k - (n - 1);
        double lo = 0.0, hi = 0.0;
        for (int j = 0; j < width; ++j) {
            const double v = signal[mirror(start + j, len)];
            lo += kernel.lowpass[j] * v;
            hi += kernel.highpass[j] * v;
        }
        approx[k] = lo;
        detail[k] = hi;
    }
}

} // namespace

KernelSpec make_kernel(int half_width) {
    if (half_width < 1) throw ParameterError("make_kernel: half-width must be >= 1");
    KernelSpec k;
    k.half_width = half_width;
    k.coefficient = std::sqrt(2.0 * half_width);
    const double tap = 1.0 / k.coefficient;
    k.lowpass.assign(2 * half_width, tap);
    k.highpass.assign(2 * half_width, tap);
    for (int i = half_width; i < 2 * half_width; ++i) k.highpass[i] = -tap;
    return k;
}

DetailMap::DetailMap(int w, int h, Direction dir) : width(w), height(h), direction(dir) {
    values.assign(static_cast<std::size_t>(w) * h, 0.0);
}

void decompose_1d(const std::vector<double>& signal, const KernelSpec& kernel,
                  std::vector<double>& approx, std::vector<double>& detail) {
    const int len = static_cast<int>(signal.size());
    if (len < 2 || len % 2 != 0)
        throw ParameterError("decompose_1d: signal length must be even and >= 2");
    approx.resize(len / 2);
    detail.resize(len / 2);
    analyze(signal.data(), len, kernel, approx.data(), detail.data());
}

Decomposition decompose_2d(const GrayImage& img, const KernelSpec& kernel) {
    if (img.width < 2 || img.height < 2 || img.width % 2 != 0 || img.height % 2 != 0)
        throw ParameterError("decompose_2d: dimensions must be even and >= 2");

    const int hw = img.width / 2;
    const int hh = img.height / 2;

    // pass 1: along rows
    std::vector<double> row_lo(static_cast<std::size_t>(hw) * img.height);
    std::vector<double> row_hi(static_cast<std::size_t>(hw) * img.height);
    for (int y = 0; y < img.height; ++y) {
        analyze(img.pixels.data() + static_cast<std::size_t>(y) * img.width, img.width,
                kernel, row_lo.data() + static_cast<std::size_t>(y) * hw,
                row_hi.data() + static_cast<std::size_t>(y) * hw);
    }

    // pass 2: along columns
    Decomposition out{DetailMap(hw, hh, Direction::approximate),
                      DetailMap(hw, hh, Direction::horizontal),
                      DetailMap(hw, hh, Direction::vertical),
                      DetailMap(hw, hh, Direction::diagonal)};
    std::vector<double> col(img.height), lo(hh), hi(hh);
    for (int x = 0; x < hw; ++x) {
        for (int y = 0; y < img.height; ++y) col[y] = row_lo[static_cast<std::size_t>(y) * hw + x];
        analyze(col.data(), img.height, kernel, lo.data(), hi.data());
        for (int y = 0; y < hh; ++y) {
            out.approx.at(x, y) = lo[y];
            out.horizontal.at(x, y) = hi[y];
        }
        for (int y = 0; y < img.height; ++y) col[y] = row_hi[static_cast<std::size_t>(y) * hw + x];
        analyze(col.data(), img.height, kernel, lo.data(), hi.data());
        for (int y = 0; y < hh; ++y) {
            out.vertical.at(x, y) = lo[y];
            out.diagonal.at(x, y) = hi[y];
        }
    }
    return out;
}

DetailMap combined_detail(const GrayImage& img, const KernelSpec& kernel) {
    Decomposition d = decompose_2d(img, kernel);
    DetailMap out(d.horizontal.width, d.horizontal.height, Direction::combined);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = std::fabs(d.horizontal.values[i]) + std::fabs(d.vertical.values[i]) +
                        std::fabs(d.diagonal.values[i]);
    return out;
}

std::vector<DetailTriple> multilayer_haar(const GrayImage& img, int layers) {
    if (layers < 1) throw ParameterError("multilayer_haar: layers must be >= 1");
    const int div = 1 << layers;
    if (img.width % div != 0 || img.height % div != 0)
        throw ParameterError("multilayer_haar: dimensions must divide 2^layers");

    const KernelSpec haar = make_kernel(1);
    std::vector<DetailTriple> out;
    out.reserve(layers);
    GrayImage current = img;
    for (int layer = 0; layer < layers; ++layer) {
        Decomposition d = decompose_2d(current, haar);
        out.push_back({d.horizontal, d.vertical, d.diagonal});
        if (layer + 1 < layers) {
            current.width = d.approx.width;
            current.height = d.approx.height;
            current.pixels = d.approx.values;
        }
    }
    return out;
}

DetailMap combine_triple(const DetailTriple& t) {
    DetailMap out(t.horizontal.width, t.horizontal.height, Direction::combined);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = std::fabs(t.horizontal.values[i]) + std::fabs(t.vertical.values[i]) +
                        std::fabs(t.diagonal.values[i]);
    return out;
}

void write_detail_csv(const std::string& path, const DetailMap& map) {
    std::ofstream out(path);
    if (!out) throw IoError("write_detail_csv: cannot open " + path);
    char buf[32];
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            std::snprintf(buf, sizeof(buf), "%.6g", map.at(x, y));
            out << buf << (x + 1 < map.width ? "," : "");
        }
        out << "\n";
    }
    if (!out) throw IoError("write_detail_csv: write failed for " + path);
}

} // namespace retina
