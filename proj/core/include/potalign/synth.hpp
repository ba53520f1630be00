#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "potalign/shot.hpp"

namespace potalign::synth {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BehaviorStep {
    std::string name;  // walk | pause | head_turn | sit
    int frames = 0;
};

// 2-D kinematic figure: rigid torso with neck, a head disc that rotates
// about the neck joint, and four pendulum legs. Rendered as exact binary
// masks; the emitted flow is the exact per-pixel part motion and the ground
// truth trajectories are sampled strictly inside part interiors, so flow
// advection reproduces them to float precision.
struct WalkerConfig {
    int width = 128;
    int height = 80;
    double scale = 1.0;
    double torso_speed = 1.0;       // px/frame while walking
    int leg_period = 8;             // frames per swing cycle
    double leg_amplitude = 0.15;    // radians
    double leg_phase = 0.0;         // initial swing phase, radians
    double head_turn_angle = 0.5;   // radians swept by one head_turn step
    double sit_fold_angle = 1.0;    // radians legs fold during sit
    std::vector<BehaviorStep> script;
    std::string shot_id = "synth";
    std::string class_label = "walker";

    // unscaled body dimensions (pixels at scale 1)
    double torso_len = 44.0;
    double torso_height = 16.0;
    double leg_len = 20.0;
    double leg_halfwidth = 2.0;
    double head_radius = 7.0;

    // ground-truth trajectory sampling
    int traj_len = 10;
    double torso_sample_step = 6.0;
    double leg_sample_step = 5.0;

    // mask corruption for robustness experiments
    int erode_mask_px = 0;
    bool with_landmarks = true;
};

// Builds the full shot: masks, exact flow, edge-strength bands, ground-truth
// trajectories tagged with part names, landmarks, and per-frame behavior
// labels. Throws ConfigError if the figure would leave the grid or the leg
// geometry admits part overlap.
Shot generate_shot(const WalkerConfig& config);

// Kinematic ground truth for tests: where the material point currently at
// world position `p` (belonging to `part`) moves by frame `to_frame`.
Vec2 ground_truth_motion(const WalkerConfig& config, const std::string& part, Vec2 p,
                         int from_frame, int to_frame);

struct DatasetConfig {
    int n_shots = 40;
    std::uint64_t seed = 0;
    int grid_height = 80;
    double corrupt_fraction = 0.0;  // fraction of shots with eroded masks
    int corrupt_erode_px = 2;
};

struct DatasetEntry {
    std::string shot_id;
    std::string path;  // relative to the corpus root
    std::vector<BehaviorStep> script;
};

// Generates a corpus of shot bundles spanning walk / head_turn / sit (plus
// pauses), with varied scales, speeds, periods and phases, and writes a
// corpus_manifest.json next to them. Deterministic under the seed.
std::vector<DatasetEntry> generate_dataset(const DatasetConfig& config,
                                           const std::filesystem::path& out_dir);

}  // namespace potalign::synth
