#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "t2m/autoencoder.hpp"

namespace t2m {

// The adversarial model: frozen text encoder E, generator G,
// discriminator D, and the dataset mean first pose x0.
struct GanModel {
    int n = 0, n_e = 0, n_x = 0, n_z = 0;
    EncoderParams encoder;  // E, never updated after transfer
    GeneratorParams generator;
    DiscriminatorParams discriminator;
    Tensor mean_first_pose;  // {n_x}

    static GanModel create(int n, int n_e, int n_x, int n_z);
};

// Per-step training metrics. value_d and value_g use the clamped
// probabilities that entered the logs; y_real / y_fake hold the
// per-element discriminator outputs.
struct StepMetrics {
    std::int64_t step = 0;
    double value_d = 0.0;
    double value_g = 0.0;
    double mean_y_real = 0.0;
    double mean_y_fake = 0.0;
    int clamped = 0;
    std::vector<double> y_real;
    std::vector<double> y_fake;
};

// Adversarial training state: model, both optimizers, step counter.
struct GanTrainer {
    GanModel model;
    AdamOptimizer adam_g;
    AdamOptimizer adam_d;
    std::int64_t step = 0;

    GanTrainer(GanModel m, double alpha_g, double alpha_d)
        : model(std::move(m)), adam_g({.lr = alpha_g}), adam_d({.lr = alpha_d}) {}
};

// Builds the GAN from a pretrained autoencoder: E is copied (and
// frozen by construction: no optimizer ever touches it), and G's
// attention, decoder cell, and pose readout are copied from the
// text-to-action decoder. G's noise matrices H_s / H_x and all of D
// are freshly initialized.
GanTrainer transfer_and_freeze(const AutoencoderParams& ae, const Tensor& mean_first_pose,
                               const TrainingConfig& cfg, Rng& rng);

// One batch step of the minimax game:
//   y_r = D(x, c), y_f = D(G(z, c), c)
//   V_D = mean(log y_r + log(1 - y_f)), ascended with adam_d
//   V_G = mean(log y_f) (non-saturating), ascended with adam_g
// Probabilities are clamped to [prob_clamp, 1 - prob_clamp] before the
// logs; clamp events are counted in the metrics. E is not updated.
// Throws NumericError (naming the batch records) if a value function
// turns NaN.
StepMetrics gan_step(std::span<const TrainingPair> batch, GanTrainer& trainer, Rng& rng,
                     const TrainingConfig& cfg);

// Runs gan_step over shuffled epochs. on_step (optional) observes the
// metrics of every step, e.g. to stream the CSV log or checkpoint.
std::vector<StepMetrics> train_gan(std::span<const TrainingPair> data, GanTrainer& trainer,
                                   const TrainingConfig& cfg,
                                   const std::function<void(const GanTrainer&, const StepMetrics&)>&
                                       on_step = {});

// Generation outside a training tape: h from E, then G(z, c).
std::vector<Tensor> run_generator(const GanModel& model, std::span<const Tensor> embedding,
                                  std::span<const Tensor> noise, CellStateActivation act);

// D(x, c) for plain tensors.
double run_discriminator(const GanModel& model, std::span<const Tensor> embedding,
                         std::span<const Tensor> action, CellStateActivation act);

// GAN checkpoint: E, G, D, both Adam states, step counter, config
// hash, dims, and the mean first pose.
void save_gan_checkpoint(const std::string& path, const GanTrainer& trainer,
                         const TrainingConfig& cfg);
GanTrainer load_gan_checkpoint(const std::string& path, const TrainingConfig& cfg);

// CSV header and row formatting for the metric log (one row per step).
extern const char* const kMetricCsvHeader;  // "step,V_D,V_G,mean_y_real,mean_y_fake,clamped"
std::string metric_csv_row(const StepMetrics& m);

}  // namespace t2m
