#pragma once

#include <vector>

#include "potalign/grids.hpp"

namespace potalign {

// Exact Euclidean distance (in pixels) from every pixel to the nearest
// foreground pixel of the mask. Foreground pixels get 0. Uses the two-pass
// lower-envelope-of-parabolas method, O(width*height).
std::vector<double> distance_transform(const BinaryMask& mask);

}  // namespace potalign
