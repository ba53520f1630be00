#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "potalign/grids.hpp"

namespace potalign {

// Thrown on malformed or inconsistent input data; the message always names
// the offending file or frame.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The canonical landmark schema. Eyes, chin, nose and neck on the head/neck,
// one upper joint + knee + foot per leg (shoulders for the front pair, hips
// for the back pair), plus the tail endpoints.
inline constexpr std::array<std::string_view, 19> kLandmarkNames = {
    "left_eye",        "right_eye",       "nose",           "chin",
    "neck",            "left_shoulder",   "right_shoulder", "left_hip",
    "right_hip",       "front_left_knee", "front_right_knee",
    "back_left_knee",  "back_right_knee", "front_left_foot",
    "front_right_foot","back_left_foot",  "back_right_foot",
    "tail_base",       "tail_tip",
};

bool is_canonical_landmark(std::string_view name);

struct Landmark {
    Vec2 position;
    bool visible = true;
};

struct LandmarkSet {
    std::map<std::string, Landmark> entries;  // keyed by canonical name

    void validate(const std::string& context) const;
};

struct Trajectory {
    int traj_id = 0;
    int start_frame = 0;
    std::vector<Vec2> points;       // one per frame spanned
    std::string part;               // optional generator tag, empty otherwise

    int length() const { return static_cast<int>(points.size()); }
    int end_frame() const { return start_frame + length() - 1; }  // inclusive
    bool covers(int first, int last) const {
        return start_frame <= first && end_frame() >= last;
    }
    const Vec2& at_frame(int frame) const { return points[frame - start_frame]; }
};

struct FrameData {
    std::optional<FlowField> flow;  // displacement to the next frame; absent on the last frame
    BinaryMask mask;
    ScalarGrid edge_strength;       // values in [0, 1]
    std::optional<LandmarkSet> landmarks;
    std::optional<std::string> behavior_label;
};

struct Shot {
    std::string shot_id;
    std::string class_label;
    std::vector<FrameData> frames;
    std::vector<Trajectory> trajectories;

    int num_frames() const { return static_cast<int>(frames.size()); }
    int width() const { return frames.empty() ? 0 : frames.front().mask.width(); }
    int height() const { return frames.empty() ? 0 : frames.front().mask.height(); }

    // Checks every structural invariant (non-empty, consistent grid
    // dimensions, trajectories inside the frame range and grid bounds).
    // Throws DataError with context on violation.
    void validate() const;
};

enum class IntervalSource { whole_shot, pause_split, periodic_split, ground_truth };

std::string_view to_string(IntervalSource s);
IntervalSource interval_source_from_string(std::string_view s);

struct Interval {
    std::string shot_id;
    int start_frame = 0;  // inclusive
    int end_frame = 0;    // inclusive
    IntervalSource source = IntervalSource::whole_shot;

    int length() const { return end_frame - start_frame + 1; }
};

}  // namespace potalign
