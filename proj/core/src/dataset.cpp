#include "t2m/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "t2m/errors.hpp"
#include "t2m/rng.hpp"
#include "t2m/vocab.hpp"

namespace t2m {

using ordered_json = nlohmann::ordered_json;

void save_dataset(const std::string& path, std::span<const DatasetRecord> records) {
    std::ofstream os(path);
    if (!os) throw InputError("save_dataset: cannot open '" + path + "'");
    for (const auto& rec : records) {
        ordered_json j;
        j["id"] = rec.id;
        j["sentence"] = rec.sentence;
        j["fps"] = rec.action.fps;
        ordered_json frames = ordered_json::array();
        for (const auto& f : rec.action.frames) {
            frames.push_back(std::vector<double>(f.x.begin(), f.x.end()));
        }
        j["frames"] = std::move(frames);
        os << j.dump() << '\n';
    }
    if (!os) throw InputError("save_dataset: write failed for '" + path + "'");
}

std::vector<DatasetRecord> load_dataset(const std::string& path, bool validate_poses) {
    std::ifstream is(path);
    if (!is) throw InputError("load_dataset: cannot open '" + path + "'");
    std::vector<DatasetRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        ordered_json j;
        try {
            j = ordered_json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw InputError("load_dataset: parse error at line " + std::to_string(line_no) +
                             ": " + e.what());
        }
        DatasetRecord rec;
        try {
            rec.id = j.at("id").get<std::string>();
            rec.sentence = j.at("sentence").get<std::vector<std::string>>();
            rec.action.fps = j.at("fps").get<double>();
            for (const auto& frame : j.at("frames")) {
                const auto values = frame.get<std::vector<double>>();
                if (values.size() != kPoseDim) {
                    throw InputError("load_dataset: record '" + rec.id + "': frame has " +
                                     std::to_string(values.size()) + " values, expected 24");
                }
                PoseVector p;
                std::copy(values.begin(), values.end(), p.x.begin());
                rec.action.frames.push_back(p);
            }
        } catch (const nlohmann::json::exception& e) {
            throw InputError("load_dataset: line " + std::to_string(line_no) +
                             ": missing or mistyped field: " + e.what());
        }
        if (rec.sentence.empty()) {
            throw InputError("load_dataset: record '" + rec.id + "': empty sentence");
        }
        if (rec.action.frames.empty()) {
            throw InputError("load_dataset: record '" + rec.id + "': no frames");
        }
        if (validate_poses) {
            for (std::size_t t = 0; t < rec.action.frames.size(); ++t) {
                const double err = rec.action.frames[t].max_unit_norm_error();
                if (err > 1e-9) {
                    throw InputError("load_dataset: record '" + rec.id + "': frame " +
                                     std::to_string(t) + " violates the unit bone norm (error " +
                                     std::to_string(err) + ")");
                }
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {

constexpr double kNeckHeight = 1.5;
constexpr double kHeadLength = 0.25;
constexpr double kShoulderWidth = 0.2;
constexpr double kArmSegment = 0.25;
constexpr double kRestAngle = 0.15;  // arms slightly away from the torso

// Smooth 0 -> 1 ramp.
double raise01(double u) { return 0.5 * (1.0 - std::cos(std::numbers::pi * u)); }

const std::vector<SyntheticClassSpec>& builtin_classes() {
    static const std::vector<SyntheticClassSpec> classes = {
        {"raise_left_arm", "a person raises the left arm", 2.2, 0.0, 0.0},
        {"raise_right_arm", "a person raises the right arm", 0.0, 2.2, 0.0},
        {"raise_both_arms", "a person raises both arms", 2.2, 2.2, 0.0},
        {"wave_left_arm", "a person waves the left arm", 1.6, 0.0, 2.0},
    };
    return classes;
}

}  // namespace

std::vector<RawKeypointFrame> synthetic_class_template(const SyntheticClassSpec& cls, int frames,
                                                       double fps) {
    std::vector<RawKeypointFrame> out;
    out.reserve(static_cast<std::size_t>(frames));
    for (int t = 0; t < frames; ++t) {
        const double u = frames > 1 ? static_cast<double>(t) / (frames - 1) : 0.0;
        RawKeypointFrame f;
        f.timestamp = static_cast<double>(t) / fps;
        const Vec3 neck = {0.0, kNeckHeight, 0.0};
        f.joints[static_cast<int>(Joint::Neck)] = neck;
        f.joints[static_cast<int>(Joint::Head)] = {neck[0], neck[1] + kHeadLength, neck[2]};
        const double wobble = cls.wave_cycles > 0.0
                                  ? 0.25 * std::sin(2.0 * std::numbers::pi * cls.wave_cycles * u)
                                  : 0.0;
        struct Arm {
            Joint shoulder, elbow, wrist;
            double sign, amplitude;
        };
        const Arm arms[2] = {
            {Joint::LShoulder, Joint::LElbow, Joint::LWrist, +1.0, cls.left_amplitude},
            {Joint::RShoulder, Joint::RElbow, Joint::RWrist, -1.0, cls.right_amplitude},
        };
        for (const Arm& arm : arms) {
            const Vec3 shoulder = {neck[0] + arm.sign * kShoulderWidth, neck[1], neck[2]};
            double theta = kRestAngle;
            if (arm.amplitude != 0.0) theta += arm.amplitude * raise01(u) + wobble;
            // Elevation in the frontal plane, measured from straight down.
            const Vec3 dir = {arm.sign * std::sin(theta), -std::cos(theta), 0.0};
            const Vec3 elbow = {shoulder[0] + kArmSegment * dir[0],
                                shoulder[1] + kArmSegment * dir[1],
                                shoulder[2] + kArmSegment * dir[2]};
            const Vec3 wrist = {elbow[0] + kArmSegment * dir[0],
                                elbow[1] + kArmSegment * dir[1],
                                elbow[2] + kArmSegment * dir[2]};
            f.joints[static_cast<int>(arm.shoulder)] = shoulder;
            f.joints[static_cast<int>(arm.elbow)] = elbow;
            f.joints[static_cast<int>(arm.wrist)] = wrist;
        }
        out.push_back(f);
    }
    return out;
}

SyntheticSpec default_synthetic_spec(int num_classes, int per_class, double noise_scale,
                                     std::uint64_t seed) {
    const auto& all = builtin_classes();
    if (num_classes < 1 || num_classes > static_cast<int>(all.size())) {
        throw InputError("synthetic spec: num_classes must be in [1, " +
                         std::to_string(all.size()) + "]");
    }
    SyntheticSpec spec;
    spec.classes.assign(all.begin(), all.begin() + num_classes);
    spec.per_class = per_class;
    spec.noise_scale = noise_scale;
    spec.seed = seed;
    return spec;
}

std::vector<DatasetRecord> generate_synthetic_dataset(const SyntheticSpec& spec) {
    if (spec.classes.empty()) throw InputError("synthetic spec: needs at least one class");
    if (spec.per_class < 1) throw InputError("synthetic spec: per_class must be >= 1");
    Rng rng(spec.seed);
    std::vector<DatasetRecord> records;
    records.reserve(spec.classes.size() * static_cast<std::size_t>(spec.per_class));
    for (const auto& cls : spec.classes) {
        const auto base = synthetic_class_template(cls, spec.frames, spec.fps);
        for (int k = 0; k < spec.per_class; ++k) {
            DatasetRecord rec;
            rec.id = cls.name + "_" + std::to_string(k);
            rec.sentence = tokenize(cls.sentence);
            rec.action.fps = spec.fps;
            rec.action.frames.reserve(base.size());
            for (const auto& frame : base) {
                RawKeypointFrame jittered = frame;
                for (auto& joint : jittered.joints) {
                    for (auto& coord : joint) coord += spec.noise_scale * rng.gaussian();
                }
                rec.action.frames.push_back(build_pose_vector(jittered));
            }
            records.push_back(std::move(rec));
        }
    }
    return records;
}

std::vector<std::vector<std::string>> sentences_of(std::span<const DatasetRecord> records) {
    std::vector<std::vector<std::string>> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.sentence);
    return out;
}

}  // namespace t2m
