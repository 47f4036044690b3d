#pragma once

#include <string>

#include "retina/image.hpp"

namespace retina {

/// Writes an 8-bit binary PGM (P5). Intensities are rounded to nearest.
void write_pgm(const std::string& path, const GrayImage& img);

GrayImage read_pgm(const std::string& path);

/// Writes an 8-bit grayscale PNG.
void write_png(const std::string& path, const GrayImage& img);

/// Reads an 8-bit PNG. Grayscale loads directly; RGB(A) routes through
/// extract_green. 16-bit and palette images are converted to 8-bit first.
GrayImage read_png_gray(const std::string& path);

/// Loads a grayscale image by extension (.pgm / .png).
GrayImage load_gray(const std::string& path);

} // namespace retina
