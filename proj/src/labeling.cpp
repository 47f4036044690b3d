#include "retina/labeling.hpp"

#include "retina/errors.hpp"

namespace retina {

int label_components(const std::vector<std::uint8_t>& bits, int width, int height,
                     int connectivity, std::vector<int>& labels) {
    if (connectivity != 4 && connectivity != 8)
        throw ParameterError("label_components: connectivity must be 4 or 8");
    const std::size_t n = static_cast<std::size_t>(width) * height;
    labels.assign(n, 0);

    static const int dx8[] = {-1, 0, 1, -1, 1, -1, 0, 1};
    static const int dy8[] = {-1, -1, -1, 0, 0, 1, 1, 1};
    static const int dx4[] = {0, -1, 1, 0};
    static const int dy4[] = {-1, 0, 0, 1};
    const int* dx = connectivity == 8 ? dx8 : dx4;
    const int* dy = connectivity == 8 ? dy8 : dy4;
    const int nn = connectivity;

    int count = 0;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < n; ++start) {
        if (!bits[start] || labels[start] != 0) continue;
        ++count;
        labels[start] = count;
        stack.assign(1, start);
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            const int px = static_cast<int>(p % width);
            const int py = static_cast<int>(p / width);
            for (int k = 0; k < nn; ++k) {
                const int qx = px + dx[k];
                const int qy = py + dy[k];
                if (qx < 0 || qx >= width || qy < 0 || qy >= height) continue;
                const std::size_t q = static_cast<std::size_t>(qy) * width + qx;
                if (bits[q] && labels[q] == 0) {
                    labels[q] = count;
                    stack.push_back(q);
                }
            }
        }
    }
    return count;
}

std::vector<std::size_t> component_sizes(const std::vector<int>& labels, int count) {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(count) + 1, 0);
    for (int l : labels)
        if (l > 0) ++sizes[static_cast<std::size_t>(l)];
    return sizes;
}

} // namespace retina
