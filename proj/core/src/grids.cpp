#include "potalign/grids.hpp"

#include <algorithm>
#include <numeric>

namespace potalign {

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(),
                                                  [](std::uint8_t v) { return v != 0; }));
}

BBox BinaryMask::bounding_box() const {
    BBox box;
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x)
            if (at(x, y)) box.expand({static_cast<double>(x), static_cast<double>(y)});
    return box;
}

Vec2 BinaryMask::center_of_mass() const {
    double sx = 0, sy = 0;
    std::size_t n = 0;
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x)
            if (at(x, y)) {
                sx += x;
                sy += y;
                ++n;
            }
    if (n == 0) return {0, 0};
    return {sx / n, sy / n};
}

void BinaryMask::keep_largest_component() {
    const int n = width_ * height_;
    if (n == 0) return;
    std::vector<int> label(static_cast<size_t>(n), -1);
    std::vector<int> stack;
    int best_label = -1;
    std::size_t best_size = 0;
    int next = 0;
    for (int start = 0; start < n; ++start) {
        if (data_[start] == 0 || label[start] >= 0) continue;
        std::size_t size = 0;
        stack.push_back(start);
        label[start] = next;
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            ++size;
            const int cx = cur % width_, cy = cur / width_;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int nx = cx + dx, ny = cy + dy;
                    if (!in_bounds(nx, ny)) continue;
                    const int ni = ny * width_ + nx;
                    if (data_[ni] != 0 && label[ni] < 0) {
                        label[ni] = next;
                        stack.push_back(ni);
                    }
                }
        }
        if (size > best_size) {
            best_size = size;
            best_label = next;
        }
        ++next;
    }
    if (best_label < 0) return;
    for (int i = 0; i < n; ++i)
        data_[i] = (data_[i] != 0 && label[i] == best_label) ? 1 : 0;
}

void BinaryMask::erode(int radius) {
    if (radius <= 0) return;
    std::vector<std::uint8_t> out(data_.size(), 0);
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x) {
            if (!at(x, y)) continue;
            bool keep = true;
            for (int dy = -radius; keep && dy <= radius; ++dy)
                for (int dx = -radius; keep && dx <= radius; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (!in_bounds(nx, ny) || !at(nx, ny)) keep = false;
                }
            if (keep) out[static_cast<size_t>(y) * width_ + x] = 1;
        }
    data_ = std::move(out);
}

void ScalarGrid::clamp01() {
    for (float& v : data_) v = std::min(1.f, std::max(0.f, v));
}

Vec2 FlowField::sample(double x, double y) const {
    const int x0 = std::clamp(static_cast<int>(std::floor(x)), 0, width_ - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor(y)), 0, height_ - 1);
    const int x1 = std::min(x0 + 1, width_ - 1);
    const int y1 = std::min(y0 + 1, height_ - 1);
    const double fx = std::clamp(x - x0, 0.0, 1.0);
    const double fy = std::clamp(y - y0, 0.0, 1.0);
    const Vec2 v00 = at(x0, y0), v10 = at(x1, y0), v01 = at(x0, y1), v11 = at(x1, y1);
    const Vec2 top = v00 * (1.0 - fx) + v10 * fx;
    const Vec2 bot = v01 * (1.0 - fx) + v11 * fx;
    return top * (1.0 - fy) + bot * fy;
}

}  // namespace potalign
