#pragma once

#include <optional>
#include <span>
#include <vector>

#include "potalign/shot.hpp"

namespace potalign::pot {

// Descriptor of an ordered trajectory pair: the anchor-to-swing angle in the
// first frame plus the sequence of relative displacement vectors, normalized
// by the total displacement. Scale- and panning-invariant by construction.
struct PotDescriptor {
    double theta = 0.0;
    std::vector<Vec2> disp;  // n-1 vectors

    // (theta, d2x, d2y, ..., dnx, dny), dimension 2(n-1)+1
    std::vector<double> flatten() const;
};

struct Pot {
    int anchor_id = 0;
    int swing_id = 0;
    int start_frame = 0;
    int length = 0;  // n
    PotDescriptor descriptor;

    int end_frame() const { return start_frame + length - 1; }
};

// Component-wise median of the flow over foreground pixels; empty when the
// mask has no foreground or the frame has no flow.
std::optional<Vec2> median_foreground_velocity(const FrameData& frame);

struct MedianVelocityTrack {
    std::vector<std::optional<Vec2>> v;  // one per frame
};

MedianVelocityTrack median_velocity_track(const Shot& shot);

// Per-frame articulation statistics. sigma[i] is the coefficient of
// variation of the flow magnitude over the mask at frame i (0 for a static
// scene); s[f] averages sigma over the n-frame window starting at f and is
// empty where the window does not fit or a frame in it is unusable.
struct ArticulationScore {
    std::vector<std::optional<double>> s;
    std::vector<std::optional<double>> sigma;
};

ArticulationScore articulation_scores(const Shot& shot, int n);

// Ranking score for an ordered candidate pair: total deviation of the swing
// from the median velocity minus total deviation of the anchor. Velocity at
// the last window frame reuses the last available point difference.
double pot_score(const Trajectory& anchor, const Trajectory& swing, int f, int n,
                 const MedianVelocityTrack& vm);

// Empty when the pair is degenerate (total relative displacement below tol).
std::optional<PotDescriptor> pot_descriptor(const Trajectory& anchor, const Trajectory& swing,
                                            int f, int n, double tol = 1e-9);

struct SelectParams {
    int n = 10;
    double theta_p = 0.15;      // fraction of ranked candidates kept
    double theta_f = 0.1;       // articulation threshold
    int max_candidates = 500;   // trajectory cap before pair enumeration
};

// PoTs starting at frame f: empty when the articulation score is below
// theta_f; otherwise every ordered pair of eligible trajectories is scored,
// ranked (ties broken on anchor then swing id), and the top
// ceil(theta_p * count) kept. Degenerate pairs are dropped after selection.
std::vector<Pot> select_pots(const Shot& shot, std::span<const Trajectory> trajectories, int f,
                             const SelectParams& params, const MedianVelocityTrack& vm,
                             const ArticulationScore& articulation);

// Convenience: selection over every frame of the shot.
std::vector<Pot> extract_shot_pots(const Shot& shot, const SelectParams& params, int jobs = 1);

}  // namespace potalign::pot
