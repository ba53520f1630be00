#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "potalign/pot.hpp"
#include "potalign/shot.hpp"

namespace potalign::partition {

// Sparse per-frame codeword counts, sorted by codeword index.
using SparseCounts = std::vector<std::pair<int, double>>;

// A maximal run of >= min_len consecutive frames whose per-frame articulation
// (coefficient of variation of foreground flow) is below theta_f.
struct PauseRun {
    int start_frame = 0;
    int end_frame = 0;  // inclusive
};

std::vector<PauseRun> detect_pauses(const pot::ArticulationScore& articulation, double theta_f,
                                    int min_len = 3);

struct PeriodicityParams {
    double theta_h = 0.1;   // minimum peak height (energy fraction)
    int min_window = 15;    // min_period * min_frequency
    int min_period = 5;     // frames
    int min_frequency = 3;  // repetitions
    int window_stride = 2;  // set both strides to 1 for exhaustive enumeration
    int start_stride = 2;
};

// One-sided spectrum of a window: per-codeword DFT magnitudes summed across
// codewords, DC dropped, normalized to total energy 1. energy[k] is the
// fraction at bin k (k cycles over the window); energy[0] is always 0.
// Empty when the window is shorter than min_window.
struct Spectrum {
    std::vector<double> energy;  // size floor(W/2)+1
};

std::optional<Spectrum> periodicity_spectrum(std::span<const SparseCounts> window_counts,
                                             int min_window = 15);

struct PeriodicDetection {
    int start_frame = 0;
    int end_frame = 0;  // inclusive
    double peak_height = 0.0;
    int period = 0;     // frames
    int frequency = 0;  // repetitions inside the window
};

// Recursive sliding-window search: repeatedly take the window with the
// globally highest eligible peak (period >= min_period, frequency >=
// min_frequency), emit it if the peak clears theta_h, and recurse on the
// remaining segments.
std::vector<PeriodicDetection> detect_periodic_subintervals(
    std::span<const SparseCounts> frame_counts, int base_frame,
    const PeriodicityParams& params = {});

// Splits the shot at pause runs (pause frames are excluded from intervals)
// and at periodic-window boundaries. Intervals shorter than 2 frames are
// merged into a contiguous neighbour where one exists.
std::vector<Interval> partition_shot(const Shot& shot, const std::vector<PauseRun>& pauses,
                                     const std::vector<PeriodicDetection>& periodic);

}  // namespace potalign::partition
