#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "t2m/pose.hpp"

namespace t2m {

struct DatasetRecord {
    std::string id;
    std::vector<std::string> sentence;  // tokens
    ActionSequence action;
};

// Line-delimited JSON, one record per line with fields `id`,
// `sentence` (token array), `fps`, `frames` (array of 24-float
// arrays). load_dataset validates record invariants; pass
// validate_poses=false for files holding raw generated poses, whose
// bone blocks are not unit length.
void save_dataset(const std::string& path, std::span<const DatasetRecord> records);
std::vector<DatasetRecord> load_dataset(const std::string& path, bool validate_poses = true);

// One synthesized motion class: a sentence template plus a parametric
// arm trajectory (smooth elevation, optional waving oscillation).
struct SyntheticClassSpec {
    std::string name;
    std::string sentence;
    double left_amplitude = 0.0;   // radians of arm elevation
    double right_amplitude = 0.0;
    double wave_cycles = 0.0;      // oscillation cycles over the clip
};

struct SyntheticSpec {
    std::vector<SyntheticClassSpec> classes;
    int per_class = 16;
    double noise_scale = 0.02;  // stddev of per-frame joint jitter
    int frames = 32;
    double fps = 10.0;
    std::uint64_t seed = 0;
};

// First `num_classes` of the built-in class templates (up to 4).
SyntheticSpec default_synthetic_spec(int num_classes = 2, int per_class = 16,
                                     double noise_scale = 0.02, std::uint64_t seed = 0);

// Deterministic under the spec seed; every record satisfies the pose
// invariants by construction.
std::vector<DatasetRecord> generate_synthetic_dataset(const SyntheticSpec& spec);

// Tokenized sentences of a record list (for vocabulary building).
std::vector<std::vector<std::string>> sentences_of(std::span<const DatasetRecord> records);

// Noise-free joint positions of one synthetic class at each frame
// (the class template without jitter); used as reference trajectories.
std::vector<RawKeypointFrame> synthetic_class_template(const SyntheticClassSpec& cls, int frames,
                                                       double fps);

}  // namespace t2m
