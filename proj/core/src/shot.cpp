#include "potalign/shot.hpp"

#include <algorithm>

namespace potalign {

bool is_canonical_landmark(std::string_view name) {
    return std::find(kLandmarkNames.begin(), kLandmarkNames.end(), name) != kLandmarkNames.end();
}

void LandmarkSet::validate(const std::string& context) const {
    if (entries.size() > kLandmarkNames.size())
        throw DataError(context + ": landmark set has " + std::to_string(entries.size()) +
                        " entries, schema allows at most " + std::to_string(kLandmarkNames.size()));
    for (const auto& [name, lm] : entries) {
        (void)lm;
        if (!is_canonical_landmark(name))
            throw DataError(context + ": unknown landmark name '" + name + "'");
    }
}

void Shot::validate() const {
    if (frames.empty()) throw DataError("shot '" + shot_id + "': no frames");
    const int w = frames.front().mask.width();
    const int h = frames.front().mask.height();
    if (w <= 0 || h <= 0) throw DataError("shot '" + shot_id + "': empty grid");
    const int n = num_frames();
    for (int f = 0; f < n; ++f) {
        const FrameData& fd = frames[f];
        const std::string ctx = "shot '" + shot_id + "' frame " + std::to_string(f);
        if (fd.mask.width() != w || fd.mask.height() != h)
            throw DataError(ctx + ": mask is " + std::to_string(fd.mask.width()) + "x" +
                            std::to_string(fd.mask.height()) + ", expected " + std::to_string(w) +
                            "x" + std::to_string(h));
        if (fd.edge_strength.width() != w || fd.edge_strength.height() != h)
            throw DataError(ctx + ": edge grid dimension mismatch");
        if (fd.flow) {
            if (fd.flow->width() != w || fd.flow->height() != h)
                throw DataError(ctx + ": flow is " + std::to_string(fd.flow->width()) + "x" +
                                std::to_string(fd.flow->height()) + ", expected " +
                                std::to_string(w) + "x" + std::to_string(h));
        } else if (f != n - 1) {
            throw DataError(ctx + ": missing flow (only the last frame may omit it)");
        }
        for (float v : fd.edge_strength.data())
            if (v < 0.f || v > 1.f) throw DataError(ctx + ": edge strength outside [0,1]");
        if (fd.landmarks) fd.landmarks->validate(ctx);
    }
    for (const Trajectory& t : trajectories) {
        const std::string ctx =
            "shot '" + shot_id + "' trajectory " + std::to_string(t.traj_id);
        if (t.length() < 2) throw DataError(ctx + ": fewer than 2 points");
        if (t.start_frame < 0 || t.end_frame() >= n)
            throw DataError(ctx + ": spans frames [" + std::to_string(t.start_frame) + "," +
                            std::to_string(t.end_frame()) + "], shot has " + std::to_string(n));
        for (const Vec2& p : t.points)
            if (p.x < 0 || p.x > w - 1 || p.y < 0 || p.y > h - 1)
                throw DataError(ctx + ": point outside grid bounds");
    }
}

std::string_view to_string(IntervalSource s) {
    switch (s) {
        case IntervalSource::whole_shot: return "whole_shot";
        case IntervalSource::pause_split: return "pause_split";
        case IntervalSource::periodic_split: return "periodic_split";
        case IntervalSource::ground_truth: return "ground_truth";
    }
    return "whole_shot";
}

IntervalSource interval_source_from_string(std::string_view s) {
    if (s == "pause_split") return IntervalSource::pause_split;
    if (s == "periodic_split") return IntervalSource::periodic_split;
    if (s == "ground_truth") return IntervalSource::ground_truth;
    if (s == "whole_shot") return IntervalSource::whole_shot;
    throw DataError("unknown interval source '" + std::string(s) + "'");
}

}  // namespace potalign
