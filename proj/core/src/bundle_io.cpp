#include "potalign/bundle_io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace potalign {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string frame_file(const char* prefix, int frame, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%04d.%s", prefix, frame, ext);
    return buf;
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return j;
}

void write_json_file(const json& j, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

static_assert(std::endian::native == std::endian::little,
              "raw grid files are little-endian; big-endian hosts need byte swaps");

}  // namespace

void write_pgm(const BinaryMask& mask, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << "P5\n" << mask.width() << " " << mask.height() << "\n255\n";
    std::vector<std::uint8_t> row(static_cast<size_t>(mask.width()));
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) row[x] = mask.at(x, y) ? 255 : 0;
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
}

BinaryMask read_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P5") throw DataError(path.string() + ": not a binary PGM (P5)");
    auto next_int = [&](const char* what) {
        // skip whitespace and '#' comment lines
        while (true) {
            const int c = in.peek();
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        long v = -1;
        in >> v;
        if (!in || v < 0) throw DataError(path.string() + ": bad " + std::string(what));
        return static_cast<int>(v);
    };
    const int w = next_int("width");
    const int h = next_int("height");
    const int maxval = next_int("maxval");
    if (maxval <= 0 || maxval > 255) throw DataError(path.string() + ": unsupported maxval");
    in.get();  // single whitespace after maxval
    BinaryMask mask(w, h);
    std::vector<std::uint8_t> row(static_cast<size_t>(w));
    for (int y = 0; y < h; ++y) {
        in.read(reinterpret_cast<char*>(row.data()), row.size());
        if (!in) throw DataError(path.string() + ": truncated pixel data");
        for (int x = 0; x < w; ++x) mask.set(x, y, row[x] != 0);
    }
    return mask;
}

void write_raw_floats(const std::vector<float>& data, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(float)));
}

std::vector<float> read_raw_floats(const fs::path& path, std::size_t expected_count) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw DataError("cannot open " + path.string());
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes != expected_count * sizeof(float))
        throw DataError(path.string() + ": has " + std::to_string(bytes) + " bytes, expected " +
                        std::to_string(expected_count * sizeof(float)));
    in.seekg(0);
    std::vector<float> data(expected_count);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw DataError(path.string() + ": short read");
    return data;
}

Shot load_shot_bundle(const fs::path& dir, const BundleLoadOptions& opts) {
    const fs::path manifest_path = dir / "manifest.json";
    if (!fs::exists(manifest_path))
        throw DataError("missing manifest: " + manifest_path.string());
    const json manifest = read_json_file(manifest_path);

    Shot shot;
    try {
        shot.shot_id = manifest.at("shot_id").get<std::string>();
        shot.class_label = manifest.at("class_label").get<std::string>();
    } catch (const json::exception& e) {
        throw DataError(manifest_path.string() + ": " + e.what());
    }
    const int n = manifest.at("num_frames").get<int>();
    const int w = manifest.at("width").get<int>();
    const int h = manifest.at("height").get<int>();
    const int flow_frames = manifest.value("flow_frames", n - 1);
    if (n <= 0) throw DataError(manifest_path.string() + ": num_frames must be positive");
    if (flow_frames != n - 1 && flow_frames != n)
        throw DataError(manifest_path.string() + ": flow_frames must be num_frames or num_frames-1");

    shot.frames.resize(static_cast<size_t>(n));
    for (int f = 0; f < n; ++f) {
        FrameData& fd = shot.frames[f];
        const fs::path mask_path = dir / frame_file("mask", f, "pgm");
        fd.mask = read_pgm(mask_path);
        if (fd.mask.width() != w || fd.mask.height() != h)
            throw DataError(mask_path.string() + ": dimension mismatch, manifest says " +
                            std::to_string(w) + "x" + std::to_string(h));
        if (opts.largest_component_filter) fd.mask.keep_largest_component();

        const fs::path edge_path = dir / frame_file("edges", f, "raw");
        ScalarGrid edges(w, h);
        edges.data() = read_raw_floats(edge_path, static_cast<size_t>(w) * h);
        edges.clamp01();
        fd.edge_strength = std::move(edges);

        if (f < flow_frames) {
            const fs::path flow_path = dir / frame_file("flow", f, "raw");
            FlowField flow(w, h);
            flow.data() = read_raw_floats(flow_path, 2 * static_cast<size_t>(w) * h);
            fd.flow = std::move(flow);
        }
    }

    if (fs::exists(dir / "labels.json")) {
        const json labels = read_json_file(dir / "labels.json");
        if (!labels.is_array() || static_cast<int>(labels.size()) != n)
            throw DataError((dir / "labels.json").string() + ": expected array of " +
                            std::to_string(n) + " labels");
        for (int f = 0; f < n; ++f) shot.frames[f].behavior_label = labels[f].get<std::string>();
    }

    if (fs::exists(dir / "landmarks.json")) {
        const json lms = read_json_file(dir / "landmarks.json");
        for (const json& entry : lms) {
            const int f = entry.at("frame").get<int>();
            if (f < 0 || f >= n)
                throw DataError((dir / "landmarks.json").string() + ": frame " +
                                std::to_string(f) + " out of range");
            LandmarkSet set;
            for (const auto& [name, val] : entry.at("points").items()) {
                Landmark lm;
                lm.position = {val.at("x").get<double>(), val.at("y").get<double>()};
                lm.visible = val.value("v", true);
                set.entries[name] = lm;
            }
            shot.frames[f].landmarks = std::move(set);
        }
    }

    if (fs::exists(dir / "trajectories.json")) {
        const json trajs = read_json_file(dir / "trajectories.json");
        for (const json& entry : trajs) {
            Trajectory t;
            t.traj_id = entry.at("id").get<int>();
            t.start_frame = entry.at("start").get<int>();
            t.part = entry.value("part", std::string());
            for (const json& p : entry.at("pts"))
                t.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            const std::string ctx = (dir / "trajectories.json").string() + ": trajectory " +
                                    std::to_string(t.traj_id);
            if (t.start_frame < 0 || t.start_frame >= n)
                throw DataError(ctx + " starts at frame " + std::to_string(t.start_frame) +
                                ", shot has " + std::to_string(n) + " frames");
            if (t.end_frame() >= n) {
                if (!opts.truncate_trajectories)
                    throw DataError(ctx + " ends at frame " + std::to_string(t.end_frame()) +
                                    ", shot has " + std::to_string(n) + " frames");
                t.points.resize(static_cast<size_t>(n - t.start_frame));
            }
            if (t.length() >= 2) shot.trajectories.push_back(std::move(t));
        }
    }

    shot.validate();
    return shot;
}

void save_shot_bundle(const Shot& shot, const fs::path& dir) {
    fs::create_directories(dir);
    const int n = shot.num_frames();
    const int flow_frames = (n > 0 && shot.frames.back().flow) ? n : n - 1;

    json manifest = {
        {"version", 1},
        {"shot_id", shot.shot_id},
        {"class_label", shot.class_label},
        {"num_frames", n},
        {"width", shot.width()},
        {"height", shot.height()},
        {"flow_frames", flow_frames},
        {"files",
         {{"mask", "mask_%04d.pgm"},
          {"flow", "flow_%04d.raw"},
          {"edges", "edges_%04d.raw"},
          {"trajectories", "trajectories.json"},
          {"landmarks", "landmarks.json"},
          {"labels", "labels.json"}}},
    };
    write_json_file(manifest, dir / "manifest.json");

    bool any_labels = false, any_landmarks = false;
    for (int f = 0; f < n; ++f) {
        const FrameData& fd = shot.frames[f];
        write_pgm(fd.mask, dir / frame_file("mask", f, "pgm"));
        write_raw_floats(fd.edge_strength.data(), dir / frame_file("edges", f, "raw"));
        if (fd.flow) write_raw_floats(fd.flow->data(), dir / frame_file("flow", f, "raw"));
        if (fd.behavior_label) any_labels = true;
        if (fd.landmarks) any_landmarks = true;
    }

    if (any_labels) {
        json labels = json::array();
        for (const FrameData& fd : shot.frames)
            labels.push_back(fd.behavior_label.value_or(""));
        write_json_file(labels, dir / "labels.json");
    }

    if (any_landmarks) {
        json lms = json::array();
        for (int f = 0; f < n; ++f) {
            if (!shot.frames[f].landmarks) continue;
            json points = json::object();
            for (const auto& [name, lm] : shot.frames[f].landmarks->entries)
                points[name] = {{"x", lm.position.x}, {"y", lm.position.y}, {"v", lm.visible}};
            lms.push_back({{"frame", f}, {"points", points}});
        }
        write_json_file(lms, dir / "landmarks.json");
    }

    json trajs = json::array();
    for (const Trajectory& t : shot.trajectories) {
        json pts = json::array();
        for (const Vec2& p : t.points) pts.push_back({p.x, p.y});
        json entry = {{"id", t.traj_id}, {"start", t.start_frame}, {"pts", pts}};
        if (!t.part.empty()) entry["part"] = t.part;
        trajs.push_back(entry);
    }
    write_json_file(trajs, dir / "trajectories.json");
}

}  // namespace potalign
