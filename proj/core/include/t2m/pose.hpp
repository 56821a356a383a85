#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "t2m/tensor.hpp"

namespace t2m {

// Upper-body joints in kinematic-chain order. The seven offset vectors
// are: neck->head, neck->l_shoulder, l_shoulder->l_elbow,
// l_elbow->l_wrist, neck->r_shoulder, r_shoulder->r_elbow,
// r_elbow->r_wrist.
enum class Joint : int {
    Neck = 0, Head, LShoulder, LElbow, LWrist, RShoulder, RElbow, RWrist
};
inline constexpr int kNumJoints = 8;
inline constexpr int kNumBones = 7;
inline constexpr int kPoseDim = 24;  // neck position + 7 unit offsets

const char* joint_name(Joint j);

// (parent, child) per bone, indexing the Joint enum.
std::span<const std::pair<int, int>> bone_chain();

using Vec3 = std::array<double, 3>;

struct RawKeypointFrame {
    double timestamp = 0.0;  // seconds
    std::array<Vec3, kNumJoints> joints{};
};

// 24-dim pose: neck position p1 followed by seven unit-length joint
// offset vectors.
struct PoseVector {
    std::array<double, kPoseDim> x{};

    Vec3 neck() const { return {x[0], x[1], x[2]}; }
    Vec3 bone(int i) const {  // i in [0, 7)
        const int o = 3 + 3 * i;
        return {x[o], x[o + 1], x[o + 2]};
    }
    void set_neck(const Vec3& v) { x[0] = v[0]; x[1] = v[1]; x[2] = v[2]; }
    void set_bone(int i, const Vec3& v) {
        const int o = 3 + 3 * i;
        x[o] = v[0]; x[o + 1] = v[1]; x[o + 2] = v[2];
    }

    Tensor to_tensor() const;
    static PoseVector from_tensor(const Tensor& t);

    // Largest deviation of any bone block from unit length.
    double max_unit_norm_error() const;
};

struct ActionSequence {
    std::vector<PoseVector> frames;
    double fps = 10.0;

    int length() const { return static_cast<int>(frames.size()); }
};

struct TimedPose {
    double timestamp = 0.0;
    PoseVector pose;
};

// Neck position plus normalized child-parent offsets along the chain.
// Throws InputError naming the joint pair if an offset is degenerate.
PoseVector build_pose_vector(const RawKeypointFrame& frame);

// Renormalizes the seven bone blocks of a raw 24-vector; the neck
// block is untouched. Throws InputError on a near-zero block.
PoseVector normalize_joints(const std::array<double, kPoseDim>& x);

// 1-D Gaussian convolution of a time series with reflected boundaries;
// sigma == 0 is the identity. Kernel truncated at radius ceil(4 sigma)
// and renormalized.
std::vector<double> smooth_signal(const std::vector<double>& signal, double sigma);

// Per-coordinate Gaussian smoothing along time followed by bone-block
// renormalization (smoothing breaks unit norms).
ActionSequence gaussian_smooth(const ActionSequence& seq, double sigma_frames);

// Linear interpolation onto a uniform grid of `length` frames at
// `fps`, anchored at the first input timestamp, then bone
// renormalization. Requires two or more frames with monotone
// timestamps spanning at least (length - 1) / fps seconds.
ActionSequence resample(std::span<const TimedPose> frames, double fps, int length);

// Mean of the first poses, bone blocks renormalized.
PoseVector mean_first_pose(std::span<const ActionSequence> actions);

struct SkeletonPose {
    std::array<Vec3, kNumJoints> joints{};
};

// Places joints along the chain: each child at parent + length * bone.
SkeletonPose fit_to_skeleton(const PoseVector& pose, std::span<const double> bone_lengths);

struct JointTrajectory {
    double fps = 10.0;
    std::vector<SkeletonPose> frames;
};

// Largest per-step joint speed (units/s) in the trajectory.
double max_joint_speed(const JointTrajectory& traj);

// Uniform time dilation by k = max(1, observed / limit), resampled at
// the original fps, so no joint moves faster than the limit.
JointTrajectory speed_limit(const JointTrajectory& traj, double max_speed);

// CSV with header "t,joint,x,y,z", one row per joint per frame.
void write_trajectory_csv(const std::string& path, const JointTrajectory& traj);

}  // namespace t2m
