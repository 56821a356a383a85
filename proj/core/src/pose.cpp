#include "t2m/pose.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "t2m/errors.hpp"

namespace t2m {

namespace {

constexpr std::array<const char*, kNumJoints> kJointNames = {
    "neck", "head", "l_shoulder", "l_elbow", "l_wrist",
    "r_shoulder", "r_elbow", "r_wrist"};

constexpr std::array<std::pair<int, int>, kNumBones> kBoneChain = {{
    {0, 1},  // neck -> head
    {0, 2},  // neck -> l_shoulder
    {2, 3},  // l_shoulder -> l_elbow
    {3, 4},  // l_elbow -> l_wrist
    {0, 5},  // neck -> r_shoulder
    {5, 6},  // r_shoulder -> r_elbow
    {6, 7},  // r_elbow -> r_wrist
}};

constexpr double kDegenerateNorm = 1e-9;

double norm3(const Vec3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

}  // namespace

const char* joint_name(Joint j) { return kJointNames[static_cast<std::size_t>(j)]; }

std::span<const std::pair<int, int>> bone_chain() { return kBoneChain; }

Tensor PoseVector::to_tensor() const {
    return Tensor({kPoseDim}, std::vector<double>(x.begin(), x.end()));
}

PoseVector PoseVector::from_tensor(const Tensor& t) {
    if (t.numel() != kPoseDim) {
        throw ShapeError("pose vector must have 24 values, got " + shape_string(t));
    }
    PoseVector p;
    for (int i = 0; i < kPoseDim; ++i) p.x[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i)];
    return p;
}

double PoseVector::max_unit_norm_error() const {
    double worst = 0.0;
    for (int i = 0; i < kNumBones; ++i) {
        worst = std::max(worst, std::fabs(norm3(bone(i)) - 1.0));
    }
    return worst;
}

PoseVector build_pose_vector(const RawKeypointFrame& frame) {
    PoseVector p;
    p.set_neck(frame.joints[0]);
    for (int i = 0; i < kNumBones; ++i) {
        const auto [parent, child] = kBoneChain[static_cast<std::size_t>(i)];
        Vec3 offset;
        for (int k = 0; k < 3; ++k) {
            offset[static_cast<std::size_t>(k)] =
                frame.joints[static_cast<std::size_t>(child)][static_cast<std::size_t>(k)] -
                frame.joints[static_cast<std::size_t>(parent)][static_cast<std::size_t>(k)];
        }
        const double n = norm3(offset);
        if (n <= kDegenerateNorm) {
            throw InputError(std::string("degenerate pose: joints '") +
                             kJointNames[static_cast<std::size_t>(parent)] + "' and '" +
                             kJointNames[static_cast<std::size_t>(child)] + "' coincide");
        }
        p.set_bone(i, {offset[0] / n, offset[1] / n, offset[2] / n});
    }
    return p;
}

PoseVector normalize_joints(const std::array<double, kPoseDim>& x) {
    PoseVector p;
    p.x = x;
    for (int i = 0; i < kNumBones; ++i) {
        const Vec3 b = p.bone(i);
        const double n = norm3(b);
        if (n <= kDegenerateNorm) {
            const auto [parent, child] = kBoneChain[static_cast<std::size_t>(i)];
            throw InputError(std::string("degenerate pose: near-zero offset '") +
                             kJointNames[static_cast<std::size_t>(parent)] + "'->'" +
                             kJointNames[static_cast<std::size_t>(child)] + "'");
        }
        p.set_bone(i, {b[0] / n, b[1] / n, b[2] / n});
    }
    return p;
}

std::vector<double> smooth_signal(const std::vector<double>& signal, double sigma) {
    if (sigma < 0.0) throw InputError("smooth_signal: sigma must be >= 0");
    if (sigma == 0.0 || signal.size() <= 1) return signal;
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double w = std::exp(-0.5 * (k / sigma) * (k / sigma));
        kernel[static_cast<std::size_t>(k + radius)] = w;
        total += w;
    }
    for (auto& w : kernel) w /= total;

    const int n = static_cast<int>(signal.size());
    // Reflect index into [0, n): ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
    auto reflect = [n](int i) {
        while (i < 0 || i >= n) {
            if (i < 0) i = -i - 1;
            if (i >= n) i = 2 * n - i - 1;
        }
        return static_cast<std::size_t>(i);
    };
    std::vector<double> out(signal.size());
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = -radius; k <= radius; ++k) {
            acc += kernel[static_cast<std::size_t>(k + radius)] * signal[reflect(i + k)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

ActionSequence gaussian_smooth(const ActionSequence& seq, double sigma_frames) {
    if (seq.frames.empty()) return seq;
    if (sigma_frames == 0.0) return seq;
    ActionSequence out;
    out.fps = seq.fps;
    const std::size_t T = seq.frames.size();
    std::vector<std::array<double, kPoseDim>> raw(T);
    std::vector<double> channel(T);
    for (std::size_t t = 0; t < T; ++t) raw[t] = seq.frames[t].x;
    for (int c = 0; c < kPoseDim; ++c) {
        for (std::size_t t = 0; t < T; ++t) channel[t] = raw[t][static_cast<std::size_t>(c)];
        const auto smoothed = smooth_signal(channel, sigma_frames);
        for (std::size_t t = 0; t < T; ++t) raw[t][static_cast<std::size_t>(c)] = smoothed[t];
    }
    out.frames.reserve(T);
    for (std::size_t t = 0; t < T; ++t) out.frames.push_back(normalize_joints(raw[t]));
    return out;
}

ActionSequence resample(std::span<const TimedPose> frames, double fps, int length) {
    if (frames.size() < 2) throw InputError("resample: need at least 2 input frames");
    if (fps <= 0.0 || length < 1) throw InputError("resample: fps and length must be positive");
    for (std::size_t i = 1; i < frames.size(); ++i) {
        if (frames[i].timestamp <= frames[i - 1].timestamp) {
            throw InputError("resample: timestamps must be strictly increasing");
        }
    }
    const double t0 = frames.front().timestamp;
    const double span = frames.back().timestamp - t0;
    const double required = static_cast<double>(length - 1) / fps;
    if (span + 1e-9 < required) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "resample: input spans %.6g s but %.6g s are required for %d frames at %g fps",
                      span, required, length, fps);
        throw InputError(msg);
    }
    ActionSequence out;
    out.fps = fps;
    out.frames.reserve(static_cast<std::size_t>(length));
    std::size_t seg = 0;
    for (int k = 0; k < length; ++k) {
        const double t = t0 + static_cast<double>(k) / fps;
        while (seg + 2 < frames.size() && frames[seg + 1].timestamp < t) ++seg;
        const TimedPose& a = frames[seg];
        const TimedPose& b = frames[seg + 1];
        const double w = (t - a.timestamp) / (b.timestamp - a.timestamp);
        std::array<double, kPoseDim> raw;
        for (int c = 0; c < kPoseDim; ++c) {
            raw[static_cast<std::size_t>(c)] =
                (1.0 - w) * a.pose.x[static_cast<std::size_t>(c)] +
                w * b.pose.x[static_cast<std::size_t>(c)];
        }
        out.frames.push_back(normalize_joints(raw));
    }
    return out;
}

PoseVector mean_first_pose(std::span<const ActionSequence> actions) {
    if (actions.empty()) throw InputError("mean_first_pose: empty dataset");
    std::array<double, kPoseDim> acc{};
    for (const auto& a : actions) {
        if (a.frames.empty()) throw InputError("mean_first_pose: action with no frames");
        for (int c = 0; c < kPoseDim; ++c) {
            acc[static_cast<std::size_t>(c)] += a.frames.front().x[static_cast<std::size_t>(c)];
        }
    }
    for (auto& v : acc) v /= static_cast<double>(actions.size());
    try {
        return normalize_joints(acc);
    } catch (const InputError&) {
        throw InputError("mean_first_pose: degenerate mean (a bone block averaged to zero)");
    }
}

SkeletonPose fit_to_skeleton(const PoseVector& pose, std::span<const double> bone_lengths) {
    if (bone_lengths.size() != kNumBones) {
        throw InputError("fit_to_skeleton: expected 7 bone lengths, got " +
                         std::to_string(bone_lengths.size()));
    }
    for (double l : bone_lengths) {
        if (!(l > 0.0)) throw InputError("fit_to_skeleton: bone lengths must be positive");
    }
    SkeletonPose out;
    out.joints[0] = pose.neck();
    for (int i = 0; i < kNumBones; ++i) {
        const auto [parent, child] = kBoneChain[static_cast<std::size_t>(i)];
        const Vec3 dir = pose.bone(i);
        const Vec3& base = out.joints[static_cast<std::size_t>(parent)];
        out.joints[static_cast<std::size_t>(child)] = {
            base[0] + bone_lengths[static_cast<std::size_t>(i)] * dir[0],
            base[1] + bone_lengths[static_cast<std::size_t>(i)] * dir[1],
            base[2] + bone_lengths[static_cast<std::size_t>(i)] * dir[2]};
    }
    return out;
}

double max_joint_speed(const JointTrajectory& traj) {
    double worst = 0.0;
    for (std::size_t t = 1; t < traj.frames.size(); ++t) {
        for (int j = 0; j < kNumJoints; ++j) {
            const Vec3& a = traj.frames[t - 1].joints[static_cast<std::size_t>(j)];
            const Vec3& b = traj.frames[t].joints[static_cast<std::size_t>(j)];
            const Vec3 d = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
            worst = std::max(worst, norm3(d) * traj.fps);
        }
    }
    return worst;
}

JointTrajectory speed_limit(const JointTrajectory& traj, double max_speed) {
    if (!(max_speed > 0.0)) throw InputError("speed_limit: max speed must be positive");
    if (traj.frames.size() < 2) return traj;
    const double observed = max_joint_speed(traj);
    const double k = std::max(1.0, observed / max_speed);
    if (k == 1.0) return traj;

    const std::size_t n = traj.frames.size();
    const double out_steps = std::ceil(static_cast<double>(n - 1) * k - 1e-9);
    const std::size_t m = static_cast<std::size_t>(out_steps) + 1;
    JointTrajectory out;
    out.fps = traj.fps;
    out.frames.reserve(m);
    for (std::size_t f = 0; f < m; ++f) {
        // Source position in input frame units, clamped to the end.
        const double s = std::min(static_cast<double>(f) / k, static_cast<double>(n - 1));
        const std::size_t i0 = std::min(static_cast<std::size_t>(s), n - 2);
        const double w = s - static_cast<double>(i0);
        SkeletonPose interp;
        for (int j = 0; j < kNumJoints; ++j) {
            const Vec3& a = traj.frames[i0].joints[static_cast<std::size_t>(j)];
            const Vec3& b = traj.frames[i0 + 1].joints[static_cast<std::size_t>(j)];
            interp.joints[static_cast<std::size_t>(j)] = {
                (1.0 - w) * a[0] + w * b[0],
                (1.0 - w) * a[1] + w * b[1],
                (1.0 - w) * a[2] + w * b[2]};
        }
        out.frames.push_back(interp);
    }
    return out;
}

void write_trajectory_csv(const std::string& path, const JointTrajectory& traj) {
    std::ofstream os(path);
    if (!os) throw InputError("write_trajectory_csv: cannot open '" + path + "'");
    os << "t,joint,x,y,z\n";
    char buf[128];
    for (std::size_t f = 0; f < traj.frames.size(); ++f) {
        const double t = static_cast<double>(f) / traj.fps;
        for (int j = 0; j < kNumJoints; ++j) {
            const Vec3& p = traj.frames[f].joints[static_cast<std::size_t>(j)];
            std::snprintf(buf, sizeof(buf), "%.17g,%s,%.17g,%.17g,%.17g\n", t,
                          kJointNames[static_cast<std::size_t>(j)], p[0], p[1], p[2]);
            os << buf;
        }
    }
    if (!os) throw InputError("write_trajectory_csv: write failed for '" + path + "'");
}

}  // namespace t2m
