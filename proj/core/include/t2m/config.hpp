#pragma once

#include <cstdint>
#include <string>

#include "t2m/encoder.hpp"

namespace t2m {

// All model and training hyperparameters. Two named profiles exist:
// "desk" (small dimensions, minutes on a laptop, the default) and
// "paper" (full-scale reference values for users with real data).
struct TrainingConfig {
    std::string profile = "desk";

    // Model dimensions.
    int n = 16;     // hidden state
    int n_e = 8;    // word embedding
    int n_x = 24;   // pose vector
    int n_z = 4;    // noise vector
    int T_o = 32;   // output frames
    double fps = 10.0;

    // Autoencoder pretraining.
    int ae_epochs = 2500;
    double ae_lr = 2e-3;
    double a1 = 1.0;
    double a2 = 5.0;

    // Adversarial training.
    int gan_epochs = 60;
    double alpha_d = 1e-3;
    double alpha_g = 2e-4;

    int batch_size = 8;
    std::uint64_t seed = 0;

    // Fresh-parameter initialization scale (uniform, biases zero).
    double init_scale = 0.08;
    // Probability clamp before logs in the value functions.
    double prob_clamp = 1e-7;
    std::string cell_state_activation = "sigmoid";
    // 0 writes only the final checkpoint.
    int checkpoint_every = 0;

    // Embedding pretraining (skip-gram with negative sampling).
    int embed_window = 2;
    int embed_negatives = 4;
    int embed_epochs = 40;
    double embed_lr = 0.025;
    int embed_min_count = 1;

    // Evaluation protocol.
    int eval_generations = 50;

    CellStateActivation cell_activation() const {
        return cell_state_activation_from_string(cell_state_activation);
    }
};

// Throws InputError for unknown profile names.
TrainingConfig profile_config(const std::string& name);

// FNV-1a over the canonical field serialization; stored in checkpoints
// so a resumed run can detect configuration drift.
std::uint64_t config_hash(const TrainingConfig& cfg);

}  // namespace t2m
