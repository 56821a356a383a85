#pragma once

#include <span>
#include <string>
#include <vector>

#include "t2m/adam.hpp"
#include "t2m/config.hpp"
#include "t2m/dataset.hpp"
#include "t2m/decoder.hpp"
#include "t2m/embedding.hpp"
#include "t2m/encoder.hpp"

namespace t2m {

// One training example: the embedded sentence and the target action
// frames, both as plain tensors.
struct TrainingPair {
    std::string id;
    std::vector<Tensor> embedding;  // e_1..e_Ti, each {n_e}
    std::vector<Tensor> action;     // x_1..x_To, each {n_x}
};

std::vector<TrainingPair> make_training_pairs(std::span<const DatasetRecord> records,
                                              const Vocabulary& vocab, const EmbeddingMatrix& V);

// Mean of the first frames over the records, as a {n_x} tensor.
Tensor mean_first_pose_tensor(std::span<const DatasetRecord> records);

// The pretraining autoencoder: text -> action -> text. The text
// encoder and the text-to-action decoder seed E and G afterwards; the
// action-to-text half exists only to shape pretraining and is dropped.
struct AutoencoderParams {
    int n = 0, n_e = 0, n_x = 0, n_z = 0;
    EncoderParams text_encoder;        // consumes word embeddings
    AttentionParams t2a_attention;
    DecoderCellParams t2a_cell;        // feeds back poses
    ReadoutParams pose_readout;
    EncoderParams action_encoder;      // consumes poses
    AttentionParams a2t_attention;
    DecoderCellParams a2t_cell;        // feeds back embeddings
    ReadoutParams embedding_readout;

    static AutoencoderParams create(int n, int n_e, int n_x, int n_z);
};

template <typename P, typename F>
    requires std::is_same_v<std::remove_const_t<P>, AutoencoderParams>
void visit_params(P& p, F&& f) {
    visit_params(p.text_encoder, f);
    visit_params(p.t2a_attention, f);
    visit_params(p.t2a_cell, f);
    visit_params(p.pose_readout, f);
    visit_params(p.action_encoder, f);
    visit_params(p.a2t_attention, f);
    visit_params(p.a2t_cell, f);
    visit_params(p.embedding_readout, f);
}

void init_uniform(AutoencoderParams& p, Rng& rng, double scale);

struct AutoencoderVars {
    EncoderVars text_encoder;
    AttentionVars t2a_attention;
    DecoderCellVars t2a_cell;
    ReadoutVars pose_readout;
    EncoderVars action_encoder;
    AttentionVars a2t_attention;
    DecoderCellVars a2t_cell;
    ReadoutVars embedding_readout;
};

template <typename F>
void visit_vars(const AutoencoderVars& v, F&& f) {
    visit_vars(v.text_encoder, f);
    visit_vars(v.t2a_attention, f);
    visit_vars(v.t2a_cell, f);
    visit_vars(v.pose_readout, f);
    visit_vars(v.action_encoder, f);
    visit_vars(v.a2t_attention, f);
    visit_vars(v.a2t_cell, f);
    visit_vars(v.embedding_readout, f);
}

AutoencoderVars bind(Tape& tape, const AutoencoderParams& p);

struct AutoencoderOutputs {
    std::vector<Var> x_hat;  // reconstructed action, length of x
    std::vector<Var> e_hat;  // reconstructed embeddings, length of e
};

// Encodes e into h; decodes h (attention + cell with zero noise,
// free-running from x0) into x_hat; encodes the real x into states s;
// decodes s (attention + cell, free-running from a zero embedding)
// into e_hat.
AutoencoderOutputs autoencoder_forward(Tape& tape, std::span<const Var> e, std::span<const Var> x,
                                       Var x0, const AutoencoderVars& p,
                                       CellStateActivation act = CellStateActivation::Sigmoid);

// (a1 / T_o) sum ||x_t - x_hat_t||^2 + (a2 / T_i) sum ||e_t - e_hat_t||^2
Var autoencoder_loss(Tape& tape, std::span<const Var> x, std::span<const Var> x_hat,
                     std::span<const Var> e, std::span<const Var> e_hat, double a1, double a2);

struct PretrainResult {
    AutoencoderParams params;
    Tensor mean_first_pose;          // {n_x}
    std::vector<double> epoch_loss;  // mean batch loss per epoch
    std::vector<double> step_loss;
};

// Adam over shuffled minibatches, minimizing the reconstruction loss.
// Deterministic under cfg.seed.
PretrainResult pretrain_autoencoder(std::span<const TrainingPair> dataset,
                                    const Tensor& mean_first_pose, const TrainingConfig& cfg);

// Autoencoder checkpoint I/O (named-tensor container).
void save_autoencoder_checkpoint(const std::string& path, const AutoencoderParams& params,
                                 const Tensor& mean_first_pose, const TrainingConfig& cfg);

struct AutoencoderCheckpoint {
    AutoencoderParams params;
    Tensor mean_first_pose;
    int n = 0, n_e = 0, n_x = 0, n_z = 0;
};

AutoencoderCheckpoint load_autoencoder_checkpoint(const std::string& path);

}  // namespace t2m
