#pragma once

#include <filesystem>
#include <string>

#include "potalign/shot.hpp"

namespace potalign {

struct BundleLoadOptions {
    // Out-of-range trajectories are truncated to the shot length when true,
    // rejected with a DataError when false.
    bool truncate_trajectories = true;
    // Keep only the largest 8-connected component of every mask.
    bool largest_component_filter = true;
};

// Reads a shot-bundle directory (manifest.json + per-frame grid files) into a
// fully validated Shot. All failures raise DataError naming the file and,
// where applicable, the frame index.
Shot load_shot_bundle(const std::filesystem::path& dir, const BundleLoadOptions& opts = {});

// Writes a Shot as a bundle directory in the same format. Round-trips
// bit-exactly with load_shot_bundle (masks are binary, grids are float32 on
// both sides).
void save_shot_bundle(const Shot& shot, const std::filesystem::path& dir);

// Raw helpers, exposed for tests and tools.
void write_pgm(const BinaryMask& mask, const std::filesystem::path& path);
BinaryMask read_pgm(const std::filesystem::path& path);
void write_raw_floats(const std::vector<float>& data, const std::filesystem::path& path);
std::vector<float> read_raw_floats(const std::filesystem::path& path, std::size_t expected_count);

}  // namespace potalign
