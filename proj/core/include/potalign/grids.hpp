#pragma once

#include <cstdint>
#include <vector>

#include "potalign/geometry.hpp"

namespace potalign {

// All grids are row-major, origin top-left, x rightward, y downward.
// Values live on the integer lattice; bilinear interpolation is used between
// lattice points. This convention is fixed because the on-disk formats are
// bit-exact.

class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, std::uint8_t fill = 0)
        : width_(width), height_(height), data_(static_cast<size_t>(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    bool at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v) { data_[static_cast<size_t>(y) * width_ + x] = v ? 1 : 0; }

    const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    std::size_t count() const;
    bool empty_mask() const { return count() == 0; }

    BBox bounding_box() const;
    Vec2 center_of_mass() const;

    // Keeps only the largest 8-connected foreground component.
    void keep_largest_component();

    // In-place morphological erosion with a (2r+1)^2 square element.
    void erode(int radius);

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

class ScalarGrid {
public:
    ScalarGrid() = default;
    ScalarGrid(int width, int height, float fill = 0.f)
        : width_(width), height_(height), data_(static_cast<size_t>(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }

    float at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }
    void set(int x, int y, float v) { data_[static_cast<size_t>(y) * width_ + x] = v; }

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    void clamp01();

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<float> data_;
};

// Per-pixel displacement to the next frame, in pixels. Stored interleaved
// (x, y) to match the on-disk layout.
class FlowField {
public:
    FlowField() = default;
    FlowField(int width, int height)
        : width_(width), height_(height), data_(2 * static_cast<size_t>(width) * height, 0.f) {}

    int width() const { return width_; }
    int height() const { return height_; }

    Vec2 at(int x, int y) const {
        const size_t i = 2 * (static_cast<size_t>(y) * width_ + x);
        return {static_cast<double>(data_[i]), static_cast<double>(data_[i + 1])};
    }
    void set(int x, int y, const Vec2& v) {
        const size_t i = 2 * (static_cast<size_t>(y) * width_ + x);
        data_[i] = static_cast<float>(v.x);
        data_[i + 1] = static_cast<float>(v.y);
    }

    // Bilinear lookup with clamped borders.
    Vec2 sample(double x, double y) const;

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<float> data_;
};

}  // namespace potalign
