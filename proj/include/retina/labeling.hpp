#pragma once

#include <cstdint>
#include <vector>

namespace retina {

/// Labels connected components of a boolean grid. Labels are 1-based in scan
/// order; background pixels get 0. connectivity must be 4 or 8.
/// Returns the number of components found.
int label_components(const std::vector<std::uint8_t>& bits, int width, int height,
                     int connectivity, std::vector<int>& labels);

/// Pixel count per label (index 0 unused).
std::vector<std::size_t> component_sizes(const std::vector<int>& labels, int count);

} // namespace retina
