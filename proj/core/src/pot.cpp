#include "potalign/pot.hpp"

#include <algorithm>
#include <cmath>

#include "potalign/parallel.hpp"

namespace potalign::pot {

namespace {

double median_of(std::vector<double>& values) {
    const size_t n = values.size();
    const size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double m = values[mid];
    if (n % 2 == 0) {
        const auto lower = std::max_element(values.begin(), values.begin() + mid);
        m = (m + *lower) / 2.0;
    }
    return m;
}

// Velocity of a trajectory at frame k from consecutive point differences;
// the final frame reuses the last available difference.
Vec2 trajectory_velocity(const Trajectory& t, int k) {
    const int last = t.end_frame();
    if (k >= last) k = last - 1;
    return t.at_frame(k + 1) - t.at_frame(k);
}

}  // namespace

std::vector<double> PotDescriptor::flatten() const {
    std::vector<double> v;
    v.reserve(1 + 2 * disp.size());
    v.push_back(theta);
    for (const Vec2& d : disp) {
        v.push_back(d.x);
        v.push_back(d.y);
    }
    return v;
}

std::optional<Vec2> median_foreground_velocity(const FrameData& frame) {
    if (!frame.flow) return std::nullopt;
    std::vector<double> xs, ys;
    const BinaryMask& mask = frame.mask;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask.at(x, y)) {
                const Vec2 v = frame.flow->at(x, y);
                xs.push_back(v.x);
                ys.push_back(v.y);
            }
    if (xs.empty()) return std::nullopt;
    return Vec2{median_of(xs), median_of(ys)};
}

MedianVelocityTrack median_velocity_track(const Shot& shot) {
    MedianVelocityTrack track;
    track.v.resize(static_cast<size_t>(shot.num_frames()));
    for (int f = 0; f < shot.num_frames(); ++f)
        track.v[f] = median_foreground_velocity(shot.frames[f]);
    return track;
}

ArticulationScore articulation_scores(const Shot& shot, int n) {
    const int num = shot.num_frames();
    ArticulationScore out;
    out.sigma.resize(static_cast<size_t>(num));
    out.s.resize(static_cast<size_t>(num));

    for (int i = 0; i < num; ++i) {
        const FrameData& fd = shot.frames[i];
        if (!fd.flow) continue;
        double sum = 0.0, sum_sq = 0.0;
        std::size_t count = 0;
        for (int y = 0; y < fd.mask.height(); ++y)
            for (int x = 0; x < fd.mask.width(); ++x)
                if (fd.mask.at(x, y)) {
                    const double m = fd.flow->at(x, y).norm();
                    sum += m;
                    sum_sq += m * m;
                    ++count;
                }
        if (count == 0) continue;
        const double mean = sum / count;
        if (mean <= 0.0) {
            out.sigma[i] = 0.0;  // static scene
            continue;
        }
        const double var = std::max(0.0, sum_sq / count - mean * mean);
        out.sigma[i] = std::sqrt(var) / mean;
    }

    for (int f = 0; f + n <= num; ++f) {
        double acc = 0.0;
        bool ok = true;
        for (int i = f; i < f + n; ++i) {
            if (!out.sigma[i]) {
                ok = false;
                break;
            }
            acc += *out.sigma[i];
        }
        if (ok) out.s[f] = acc / n;
    }
    return out;
}

double pot_score(const Trajectory& anchor, const Trajectory& swing, int f, int n,
                 const MedianVelocityTrack& vm) {
    double score = 0.0;
    for (int k = f; k < f + n; ++k) {
        const Vec2 m = vm.v[k] ? *vm.v[k] : Vec2{0, 0};
        score += (trajectory_velocity(swing, k) - m).norm() -
                 (trajectory_velocity(anchor, k) - m).norm();
    }
    return score;
}

std::optional<PotDescriptor> pot_descriptor(const Trajectory& anchor, const Trajectory& swing,
                                            int f, int n, double tol) {
    PotDescriptor d;
    Vec2 prev = swing.at_frame(f) - anchor.at_frame(f);
    d.theta = std::atan2(prev.y, prev.x);
    d.disp.reserve(static_cast<size_t>(n - 1));
    double total = 0.0;
    for (int k = f + 1; k < f + n; ++k) {
        const Vec2 r = swing.at_frame(k) - anchor.at_frame(k);
        d.disp.push_back(r - prev);
        total += (r - prev).norm();
        prev = r;
    }
    if (total < tol) return std::nullopt;
    for (Vec2& v : d.disp) v = v / total;
    return d;
}

std::vector<Pot> select_pots(const Shot& shot, std::span<const Trajectory> trajectories, int f,
                             const SelectParams& params, const MedianVelocityTrack& vm,
                             const ArticulationScore& articulation) {
    std::vector<Pot> out;
    if (f < 0 || f >= static_cast<int>(articulation.s.size())) return out;
    if (!articulation.s[f] || *articulation.s[f] < params.theta_f) return out;

    const int last = f + params.n - 1;
    std::vector<const Trajectory*> eligible;
    for (const Trajectory& t : trajectories) {
        if (!t.covers(f, last)) continue;
        const Vec2& p = t.at_frame(f);
        const int x = static_cast<int>(std::lround(p.x));
        const int y = static_cast<int>(std::lround(p.y));
        const BinaryMask& mask = shot.frames[f].mask;
        if (mask.in_bounds(x, y) && mask.at(x, y)) eligible.push_back(&t);
    }
    if (eligible.size() < 2) return out;

    std::sort(eligible.begin(), eligible.end(),
              [](const Trajectory* a, const Trajectory* b) { return a->traj_id < b->traj_id; });
    if (static_cast<int>(eligible.size()) > params.max_candidates) {
        // uniform subsample by rank to bound the quadratic enumeration
        std::vector<const Trajectory*> kept;
        kept.reserve(static_cast<size_t>(params.max_candidates));
        const double stride =
            static_cast<double>(eligible.size()) / params.max_candidates;
        for (int i = 0; i < params.max_candidates; ++i)
            kept.push_back(eligible[static_cast<size_t>(i * stride)]);
        eligible = std::move(kept);
    }

    struct Scored {
        double score;
        const Trajectory* anchor;
        const Trajectory* swing;
    };
    std::vector<Scored> candidates;
    candidates.reserve(eligible.size() * (eligible.size() - 1));
    for (const Trajectory* a : eligible)
        for (const Trajectory* s : eligible) {
            if (a == s) continue;
            candidates.push_back({pot_score(*a, *s, f, params.n, vm), a, s});
        }

    std::sort(candidates.begin(), candidates.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.anchor->traj_id != b.anchor->traj_id) return a.anchor->traj_id < b.anchor->traj_id;
        return a.swing->traj_id < b.swing->traj_id;
    });

    const std::size_t keep = static_cast<std::size_t>(
        std::ceil(params.theta_p * static_cast<double>(candidates.size())));
    for (std::size_t i = 0; i < keep && i < candidates.size(); ++i) {
        auto desc = pot_descriptor(*candidates[i].anchor, *candidates[i].swing, f, params.n);
        if (!desc) continue;  // degenerate pairs never reach the codebook
        Pot p;
        p.anchor_id = candidates[i].anchor->traj_id;
        p.swing_id = candidates[i].swing->traj_id;
        p.start_frame = f;
        p.length = params.n;
        p.descriptor = std::move(*desc);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Pot> extract_shot_pots(const Shot& shot, const SelectParams& params, int jobs) {
    const MedianVelocityTrack vm = median_velocity_track(shot);
    const ArticulationScore art = articulation_scores(shot, params.n);
    const int num = shot.num_frames();
    std::vector<std::vector<Pot>> per_frame(static_cast<size_t>(num));
    parallel_for(static_cast<size_t>(num), jobs, [&](std::size_t f) {
        per_frame[f] = select_pots(shot, shot.trajectories, static_cast<int>(f), params, vm, art);
    });
    std::vector<Pot> out;
    for (auto& v : per_frame)
        for (Pot& p : v) out.push_back(std::move(p));
    return out;
}

}  // namespace potalign::pot
