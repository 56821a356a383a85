#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "t2m/config.hpp"

namespace t2m::cli {

// Everything a command run needs: hyperparameters plus paths and
// command-specific options. Serializes to a flat JSON object; the
// resolved config of every run is written beside its outputs and can
// be replayed with --config.
struct RunConfig {
    TrainingConfig train;

    // Paths.
    std::string dataset;
    std::string embeddings;
    std::string autoencoder;  // pretrain output / train-gan input
    std::string checkpoint;   // gan checkpoint (generate, evaluate)
    std::string input;        // export-trajectory action file
    std::string out = ".";

    // synth
    int classes = 2;
    int per_class = 16;
    double noise_scale = 0.02;

    // generate / export-trajectory
    std::string sentence;
    int num_samples = 3;
    bool skeleton = false;
    std::vector<double> bone_lengths = {0.25, 0.2, 0.28, 0.25, 0.2, 0.28, 0.25};
    double max_speed = 2.0;  // units/s for speed limiting
};

std::string run_config_to_json(const RunConfig& rc);
void apply_json_to_run_config(const std::string& json_text, RunConfig& rc);

// Entry point behind the binary. args excludes argv[0]. Returns the
// process exit code: 0 success, 1 input/config error, 2 numeric
// failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace t2m::cli
