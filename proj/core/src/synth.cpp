#include "potalign/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "potalign/bundle_io.hpp"
#include "potalign/random.hpp"

namespace potalign::synth {

namespace {

constexpr double kPi = std::numbers::pi;

double smoothstep(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    if (len2 <= 0.0) return distance(p, a);
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return distance(p, a + ab * t);
}

struct Figure {
    double L, H;              // torso extents
    double leg_len, hw;       // leg length and capsule half-width
    double head_r, head_drop; // head disc radius, disc center below joint distance
    double neck_r;
    double jx;                // neck joint x in torso frame
    double neck_rise;         // joint height above torso top edge
    std::array<Vec2, 4> hips; // torso-frame hip offsets: BL, BR, FL, FR
    std::array<double, 4> deltas;
    double scale;
};

Figure make_figure(const WalkerConfig& c) {
    Figure g;
    g.scale = c.scale;
    g.L = c.torso_len * c.scale;
    g.H = c.torso_height * c.scale;
    g.leg_len = c.leg_len * c.scale;
    g.hw = std::max(2.0, c.leg_halfwidth * c.scale);
    g.head_r = c.head_radius * c.scale;
    g.head_drop = 4.0 * c.scale;
    g.neck_r = std::max(2.5, 2.5 * c.scale);
    g.neck_rise = 5.0 * c.scale;
    g.jx = g.L / 2.0 - 4.0 * c.scale;
    const std::array<double, 4> fx = {0.10, 0.35, 0.60, 0.85};
    for (int i = 0; i < 4; ++i) g.hips[i] = {-g.L / 2.0 + fx[i] * g.L, g.H / 2.0};
    g.deltas = {0.0, kPi, 0.0, kPi};
    return g;
}

struct State {
    Vec2 c;                      // torso center
    double psi = 0.0;            // head angle about the neck joint
    std::array<double, 4> phi{}; // leg angles, 0 = hanging down
};

struct PartPose {
    Vec2 origin;
    double angle = 0.0;

    Vec2 to_world(const Vec2& m) const { return origin + rotate(m, angle); }
    Vec2 to_material(const Vec2& p) const { return rotate(p - origin, -angle); }
};

constexpr std::array<const char*, 6> kPartNames = {
    "head", "leg_back_left", "leg_back_right", "leg_front_left", "leg_front_right", "torso"};

PartPose part_pose(const Figure& g, const State& s, int part) {
    if (part == 0) return {s.c + Vec2{g.jx, -g.H / 2.0 - g.neck_rise}, s.psi};
    if (part >= 1 && part <= 4) return {s.c + g.hips[part - 1], s.phi[part - 1]};
    return {s.c, 0.0};  // torso (rect + neck)
}

bool part_contains(const Figure& g, const State& s, int part, const Vec2& p) {
    const PartPose pose = part_pose(g, s, part);
    const Vec2 m = pose.to_material(p);
    if (part == 0) return distance(m, {0.0, -g.head_drop}) <= g.head_r;
    if (part >= 1 && part <= 4)
        return point_segment_distance(m, {0, 0}, {0, g.leg_len}) <= g.hw;
    if (std::abs(m.x) <= g.L / 2.0 && std::abs(m.y) <= g.H / 2.0) return true;
    return point_segment_distance(m, {g.jx, -g.H / 2.0 + 2.0},
                                  {g.jx, -g.H / 2.0 - g.neck_rise}) <= g.neck_r;
}

int part_at(const Figure& g, const State& s, const Vec2& p) {
    for (int part = 0; part < 6; ++part)
        if (part_contains(g, s, part, p)) return part;
    return -1;
}

void validate_config(const WalkerConfig& c, const Figure& g) {
    if (c.script.empty()) throw ConfigError("walker script is empty");
    for (const BehaviorStep& step : c.script) {
        if (step.frames < 2)
            throw ConfigError("behavior step '" + step.name + "' shorter than 2 frames");
        if (step.name != "walk" && step.name != "pause" && step.name != "head_turn" &&
            step.name != "sit")
            throw ConfigError("unknown behavior '" + step.name + "'");
    }
    if (c.leg_period < 5) throw ConfigError("leg period must be at least 5 frames");
    if (c.scale < 0.7) throw ConfigError("scale below 0.7 leaves no interior to sample");
    const double max_angle = std::max(c.leg_amplitude, c.sit_fold_angle * 0.0 + c.leg_amplitude);
    const double gap = 0.25 * g.L;
    const double sweep = 2.0 * g.leg_len * std::sin(max_angle) + 2.0 * g.hw + 1.0;
    if (sweep > gap)
        throw ConfigError("leg amplitude " + std::to_string(c.leg_amplitude) +
                          " makes neighbouring legs overlap (sweep " + std::to_string(sweep) +
                          " > hip gap " + std::to_string(gap) + ")");
}

std::vector<State> build_states(const WalkerConfig& c, const Figure& g) {
    int total = 0;
    for (const BehaviorStep& s : c.script) total += s.frames;

    std::vector<State> states;
    states.reserve(static_cast<size_t>(total));

    State cur;
    const double bottom_extent = g.H / 2.0 + g.leg_len + 3.0 * g.scale;
    cur.c = {g.L / 2.0 + 4.0, c.height - 4.0 - bottom_extent};
    double walk_clock = 0.0;
    double head_dir = 1.0;

    for (const BehaviorStep& step : c.script) {
        const double psi_start = cur.psi;
        const std::array<double, 4> phi_start = cur.phi;
        const double cy_start = cur.c.y;
        if (step.name == "head_turn" && psi_start > 0.0) head_dir = -1.0;
        if (step.name == "head_turn" && psi_start <= 0.0) head_dir = 1.0;
        for (int u = 0; u < step.frames; ++u) {
            if (step.name == "walk") {
                if (!states.empty()) cur.c.x += c.torso_speed;
                for (int i = 0; i < 4; ++i)
                    cur.phi[i] = c.leg_amplitude *
                                 std::sin(2.0 * kPi * walk_clock / c.leg_period + c.leg_phase +
                                          g.deltas[i]);
                walk_clock += 1.0;
            } else if (step.name == "head_turn") {
                const double v = smoothstep(static_cast<double>(u) / (step.frames - 1));
                cur.psi = psi_start + head_dir * c.head_turn_angle * v;
            } else if (step.name == "sit") {
                const double v = smoothstep(static_cast<double>(u) / (step.frames - 1));
                for (int i = 0; i < 4; ++i)
                    cur.phi[i] = phi_start[i] + (c.sit_fold_angle - phi_start[i]) * v;
                cur.c.y = cy_start + 3.0 * g.scale * v;
            }
            // pause: state unchanged
            states.push_back(cur);
        }
    }
    return states;
}

void validate_bounds(const WalkerConfig& c, const Figure& g, const std::vector<State>& states) {
    const double margin = 2.0;
    for (size_t t = 0; t < states.size(); ++t) {
        const State& s = states[t];
        BBox box;
        box.expand(s.c + Vec2{-g.L / 2.0, -g.H / 2.0});
        box.expand(s.c + Vec2{g.L / 2.0, g.H / 2.0});
        const PartPose head = part_pose(g, s, 0);
        const Vec2 hc = head.to_world({0.0, -g.head_drop});
        box.expand(hc + Vec2{g.head_r, g.head_r});
        box.expand(hc - Vec2{g.head_r, g.head_r});
        for (int i = 1; i <= 4; ++i) {
            const PartPose leg = part_pose(g, s, i);
            const Vec2 tip = leg.to_world({0.0, g.leg_len});
            box.expand(tip + Vec2{g.hw, g.hw});
            box.expand(tip - Vec2{g.hw, g.hw});
        }
        if (box.min_x < margin || box.min_y < margin || box.max_x > c.width - 1 - margin ||
            box.max_y > c.height - 1 - margin)
            throw ConfigError("figure leaves the grid at frame " + std::to_string(t) +
                              " (extent [" + std::to_string(box.min_x) + "," +
                              std::to_string(box.max_x) + "]x[" + std::to_string(box.min_y) +
                              "," + std::to_string(box.max_y) + "] in " +
                              std::to_string(c.width) + "x" + std::to_string(c.height) + ")");
    }
}

// Material sample points per part; kept at least 2px inside the part surface
// so the 4-point bilinear stencil of any sample never touches another part
// or the background (which makes flow advection exact for these points).
std::vector<std::pair<int, Vec2>> sample_points(const WalkerConfig& c, const Figure& g) {
    std::vector<std::pair<int, Vec2>> pts;
    const double x0 = -g.L / 2.0 + 4.0, x1 = g.L / 2.0 - 4.0;
    for (double x = x0; x <= x1 + 1e-9; x += c.torso_sample_step)
        for (double y : {-g.H / 2.0 + 3.0, g.H / 2.0 - 4.0})
            pts.push_back({5, {x, y}});
    for (int leg = 0; leg < 4; ++leg)
        for (double f : {0.25, 0.85})
            pts.push_back({1 + leg, {0.0, f * g.leg_len}});
    int head_count = 0;
    for (double y = -g.head_drop - g.head_r; y <= -g.head_drop + 1e-9 && head_count < 4;
         y += 2.5)
        for (double x = -g.head_r; x <= g.head_r + 1e-9 && head_count < 4; x += 2.5) {
            const Vec2 m{x, y};
            if (distance(m, {0.0, -g.head_drop}) <= g.head_r - 2.5 && y <= -g.head_drop) {
                pts.push_back({0, m});
                ++head_count;
            }
        }
    return pts;
}

void add_landmarks(const WalkerConfig& c, const Figure& g, const std::vector<State>& states,
                   Shot& shot) {
    struct Def {
        const char* name;
        int part;
        Vec2 m;
    };
    const double s = g.scale;
    const std::vector<Def> defs = {
        {"left_eye", 0, {-1.5 * s, -g.head_drop - 1.5 * s}},
        {"right_eye", 0, {1.5 * s, -g.head_drop - 1.5 * s}},
        {"nose", 0, {g.head_r - 2.0 * s, -g.head_drop + 1.0 * s}},
        {"chin", 0, {g.head_r - 3.0 * s, -g.head_drop + 3.5 * s}},
        {"neck", 5, {g.jx, -g.H / 2.0 - g.neck_rise}},
        {"left_hip", 5, g.hips[0]},
        {"right_hip", 5, g.hips[1]},
        {"left_shoulder", 5, g.hips[2]},
        {"right_shoulder", 5, g.hips[3]},
        {"back_left_knee", 1, {0.0, g.leg_len / 2.0}},
        {"back_right_knee", 2, {0.0, g.leg_len / 2.0}},
        {"front_left_knee", 3, {0.0, g.leg_len / 2.0}},
        {"front_right_knee", 4, {0.0, g.leg_len / 2.0}},
        {"back_left_foot", 1, {0.0, g.leg_len}},
        {"back_right_foot", 2, {0.0, g.leg_len}},
        {"front_left_foot", 3, {0.0, g.leg_len}},
        {"front_right_foot", 4, {0.0, g.leg_len}},
        {"tail_base", 5, {-g.L / 2.0 + 1.5, -g.H / 2.0 + 2.0}},
        {"tail_tip", 5, {-g.L / 2.0 + 1.5, g.H / 2.0 - 2.0}},
    };
    (void)c;
    for (size_t t = 0; t < states.size(); ++t) {
        LandmarkSet set;
        for (const Def& d : defs) {
            const PartPose pose = part_pose(g, states[t], d.part);
            set.entries[d.name] = {pose.to_world(d.m), true};
        }
        shot.frames[t].landmarks = std::move(set);
    }
}

ScalarGrid edge_band(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    ScalarGrid edges(w, h, 0.f);
    auto fg = [&](int x, int y) { return mask.in_bounds(x, y) && mask.at(x, y); };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const bool on = mask.at(x, y);
            const bool border_fg = fg(x - 1, y) || fg(x + 1, y) || fg(x, y - 1) || fg(x, y + 1);
            const bool border_bg =
                !fg(x - 1, y) || !fg(x + 1, y) || !fg(x, y - 1) || !fg(x, y + 1);
            if (on && border_bg)
                edges.set(x, y, 1.f);
            else if (!on && border_fg)
                edges.set(x, y, 0.6f);
        }
    return edges;
}

}  // namespace

Shot generate_shot(const WalkerConfig& config) {
    const Figure g = make_figure(config);
    validate_config(config, g);
    const std::vector<State> states = build_states(config, g);
    validate_bounds(config, g, states);
    const int n = static_cast<int>(states.size());

    Shot shot;
    shot.shot_id = config.shot_id;
    shot.class_label = config.class_label;
    shot.frames.resize(static_cast<size_t>(n));

    // labels
    {
        int t = 0;
        for (const BehaviorStep& step : config.script)
            for (int u = 0; u < step.frames; ++u) shot.frames[t++].behavior_label = step.name;
    }

    for (int t = 0; t < n; ++t) {
        BinaryMask mask(config.width, config.height);
        for (int y = 0; y < config.height; ++y)
            for (int x = 0; x < config.width; ++x)
                if (part_at(g, states[t], {static_cast<double>(x), static_cast<double>(y)}) >= 0)
                    mask.set(x, y, true);
        if (config.erode_mask_px > 0) mask.erode(config.erode_mask_px);
        shot.frames[t].edge_strength = edge_band(mask);
        shot.frames[t].mask = std::move(mask);
    }

    for (int t = 0; t + 1 < n; ++t) {
        FlowField flow(config.width, config.height);
        for (int y = 0; y < config.height; ++y)
            for (int x = 0; x < config.width; ++x) {
                const Vec2 p{static_cast<double>(x), static_cast<double>(y)};
                const int part = part_at(g, states[t], p);
                if (part < 0) continue;
                const Vec2 m = part_pose(g, states[t], part).to_material(p);
                flow.set(x, y, part_pose(g, states[t + 1], part).to_world(m) - p);
            }
        shot.frames[t].flow = std::move(flow);
    }

    // ground-truth trajectories, spawned every frame
    const auto samples = sample_points(config, g);
    int next_id = 0;
    for (int f = 0; f + 1 < n; ++f) {
        const int len = std::min(config.traj_len, n - f);
        for (const auto& [part, m] : samples) {
            Trajectory t;
            t.traj_id = next_id++;
            t.start_frame = f;
            t.part = kPartNames[part];
            t.points.reserve(static_cast<size_t>(len));
            for (int k = 0; k < len; ++k)
                t.points.push_back(part_pose(g, states[f + k], part).to_world(m));
            shot.trajectories.push_back(std::move(t));
        }
    }

    if (config.with_landmarks) add_landmarks(config, g, states, shot);

    shot.validate();
    return shot;
}

Vec2 ground_truth_motion(const WalkerConfig& config, const std::string& part, Vec2 p,
                         int from_frame, int to_frame) {
    const Figure g = make_figure(config);
    const std::vector<State> states = build_states(config, g);
    int idx = -1;
    for (int i = 0; i < 6; ++i)
        if (part == kPartNames[i]) idx = i;
    if (idx < 0) throw ConfigError("unknown part '" + part + "'");
    const Vec2 m = part_pose(g, states[from_frame], idx).to_material(p);
    return part_pose(g, states[to_frame], idx).to_world(m);
}

std::vector<DatasetEntry> generate_dataset(const DatasetConfig& config,
                                           const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir / "shots");
    Rng rng(config.seed ^ 0x5eedc0ffeeULL);

    std::vector<DatasetEntry> entries;
    nlohmann::json manifest_shots = nlohmann::json::array();

    for (int i = 0; i < config.n_shots; ++i) {
        Rng sr = rng.fork(static_cast<std::uint64_t>(i));
        WalkerConfig wc;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "synth_%04d", i);
        wc.shot_id = buf;
        wc.height = config.grid_height;
        wc.scale = sr.next_double(0.85, 1.25);
        wc.torso_speed = sr.next_double(0.8, 1.25);
        wc.leg_period = 6 + 2 * static_cast<int>(sr.next_below(4));  // 6, 8, 10, 12
        wc.leg_amplitude = sr.next_double(0.10, 0.15);
        wc.leg_phase = sr.next_double(0.0, 2.0 * kPi);
        wc.torso_len = sr.next_double(40.0, 48.0);
        wc.leg_len = sr.next_double(18.0, 22.0);
        wc.head_turn_angle = sr.next_double(0.4, 0.55);

        auto frames = [&](int lo, int hi) { return sr.next_int(lo, hi); };
        switch (i % 5) {
            case 0: wc.script = {{"walk", frames(34, 46)}}; break;
            case 1:
                wc.script = {{"walk", frames(24, 32)},
                             {"pause", frames(5, 7)},
                             {"sit", frames(18, 24)}};
                break;
            case 2:
                wc.script = {{"head_turn", frames(20, 26)},
                             {"pause", frames(5, 7)},
                             {"head_turn", frames(20, 26)}};
                break;
            case 3:
                wc.script = {{"walk", frames(24, 32)},
                             {"pause", frames(5, 7)},
                             {"head_turn", frames(20, 26)}};
                break;
            default:
                wc.script = {{"sit", frames(18, 24)},
                             {"pause", frames(5, 7)},
                             {"head_turn", frames(18, 24)}};
                break;
        }

        int walk_frames = 0;
        for (const BehaviorStep& s : wc.script)
            if (s.name == "walk") walk_frames += s.frames;
        const double span = wc.torso_len * wc.scale + 4.0 * wc.scale + wc.head_radius * wc.scale;
        wc.width = static_cast<int>(std::ceil(span + wc.torso_speed * walk_frames + 14.0));

        if (config.corrupt_fraction > 0.0 &&
            sr.next_double() < config.corrupt_fraction)
            wc.erode_mask_px = config.corrupt_erode_px;

        const Shot shot = generate_shot(wc);
        const std::string rel = "shots/" + shot.shot_id;
        save_shot_bundle(shot, out_dir / rel);

        DatasetEntry entry{shot.shot_id, rel, wc.script};
        entries.push_back(entry);
        nlohmann::json js;
        js["shot_id"] = shot.shot_id;
        js["path"] = rel;
        js["class_label"] = shot.class_label;
        nlohmann::json script = nlohmann::json::array();
        for (const BehaviorStep& s : wc.script) script.push_back({{"name", s.name}, {"frames", s.frames}});
        js["script"] = script;
        manifest_shots.push_back(js);
    }

    nlohmann::json manifest = {
        {"version", 1}, {"seed", config.seed}, {"shots", manifest_shots}};
    std::ofstream out(out_dir / "corpus_manifest.json", std::ios::binary);
    if (!out) throw DataError("cannot write " + (out_dir / "corpus_manifest.json").string());
    out << manifest.dump(2) << '\n';

    return entries;
}

}  // namespace potalign::synth
