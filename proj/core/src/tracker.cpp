#include "potalign/tracker.hpp"

#include <cmath>

namespace potalign {

std::vector<Trajectory> advect_tracker(const Shot& shot, const TrackerParams& params) {
    std::vector<Trajectory> out;
    const int n = shot.num_frames();
    const int w = shot.width(), h = shot.height();
    const int step = std::max(1, params.grid_step);
    int next_id = 0;

    auto inside_mask = [&](int frame, const Vec2& p) {
        const int x = static_cast<int>(std::lround(p.x));
        const int y = static_cast<int>(std::lround(p.y));
        return shot.frames[frame].mask.in_bounds(x, y) && shot.frames[frame].mask.at(x, y);
    };

    for (int f = 0; f + 1 < n; ++f) {
        const BinaryMask& mask = shot.frames[f].mask;
        for (int y = step / 2; y < h; y += step) {
            for (int x = step / 2; x < w; x += step) {
                if (!mask.at(x, y)) continue;
                Trajectory t;
                t.traj_id = next_id;
                t.start_frame = f;
                Vec2 p{static_cast<double>(x), static_cast<double>(y)};
                t.points.push_back(p);
                for (int k = f; k + 1 < n && t.length() < params.traj_len; ++k) {
                    if (!shot.frames[k].flow) break;
                    const Vec2 q = p + shot.frames[k].flow->sample(p.x, p.y);
                    if (q.x < 0 || q.x > w - 1 || q.y < 0 || q.y > h - 1) break;
                    if (!inside_mask(k + 1, q)) break;
                    t.points.push_back(q);
                    p = q;
                }
                if (t.length() >= 2) {
                    out.push_back(std::move(t));
                    ++next_id;
                }
            }
        }
    }
    return out;
}

}  // namespace potalign
