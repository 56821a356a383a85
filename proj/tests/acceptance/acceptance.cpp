// Acceptance suite: one pass/fail line per criterion, nonzero exit if
// any fails. Everything runs the desk-scale configuration; total
// runtime is a few minutes single-threaded.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "t2m/autoencoder.hpp"
#include "t2m/dataset.hpp"
#include "t2m/embedding.hpp"
#include "t2m/gan.hpp"
#include "t2m/gradcheck.hpp"
#include "t2m/params_io.hpp"
#include "t2m/pose.hpp"
#include "t2m_cli/commands.hpp"

using namespace t2m;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %-28s %s\n", pass ? "PASS" : "FAIL", criterion, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

Tensor random_tensor(Rng& rng, std::vector<int> shape, double lo = -0.5, double hi = 0.5) {
    Tensor t(std::move(shape));
    for (auto& v : t.values()) v = rng.uniform(lo, hi);
    return t;
}

std::vector<Var> bind_all(Tape& tape, const std::vector<Tensor>& ts) {
    std::vector<Var> vars;
    for (const auto& t : ts) vars.push_back(tape.leaf(t));
    return vars;
}

// Worst relative error between tape gradients and central finite
// differences over every tensor of a parameter struct.
template <typename P, typename EvalFn>
double param_gradient_error(P& params, EvalFn&& eval, const std::vector<Tensor>& analytical) {
    std::vector<Tensor*> tensors = param_tensors(params);
    double worst = 0.0;
    for (std::size_t k = 0; k < tensors.size(); ++k) {
        const Tensor fd = finite_difference_gradient(
            [&](const Tensor& probe) {
                const Tensor saved = *tensors[k];
                *tensors[k] = probe;
                const double v = eval(params);
                *tensors[k] = saved;
                return v;
            },
            *tensors[k], 1e-5);
        worst = std::max(worst, relative_error(analytical[k], fd));
    }
    return worst;
}

// Dimensions used by the gradient-fidelity criterion.
constexpr int kN = 4;
constexpr int kNe = 3;
constexpr int kNx = 6;
constexpr int kNz = 2;
constexpr int kTi = 3;
constexpr int kTo = 4;
constexpr int kDraws = 20;

// ------------------------------------------------------------------ 1

void criterion_gradient_fidelity() {
    double worst = 0.0;
    std::string failing;

    for (int draw = 0; draw < kDraws; ++draw) {
        Rng rng(1000 + static_cast<std::uint64_t>(draw));
        std::vector<Tensor> e_vals, x_vals, z_vals, h_vals;
        for (int t = 0; t < kTi; ++t) e_vals.push_back(random_tensor(rng, {kNe}));
        for (int t = 0; t < kTo; ++t) x_vals.push_back(random_tensor(rng, {kNx}));
        for (int t = 0; t < kTo; ++t) z_vals.push_back(random_tensor(rng, {kNz}));
        for (int t = 0; t < kTi; ++t) h_vals.push_back(random_tensor(rng, {kN}));
        const Tensor x0 = random_tensor(rng, {kNx});
        const Tensor probe_n = random_tensor(rng, {kN});
        const Tensor probe_x = random_tensor(rng, {kNx});

        auto track = [&](const char* unit, double err) {
            if (err > worst) {
                worst = err;
                failing = unit;
            }
        };

        {  // encoder cell over a full unroll
            EncoderParams p = EncoderParams::create(kN, kNe);
            init_uniform(p, rng, 0.4);
            auto eval = [&](EncoderParams& pp) {
                Tape tape;
                const EncoderVars vars = bind(tape, pp);
                const auto h = encode(tape, bind_all(tape, e_vals), vars);
                return tape.scalar_value(tape.dot(tape.leaf(probe_n), h.back()));
            };
            Tape tape;
            const EncoderVars vars = bind(tape, p);
            const auto h = encode(tape, bind_all(tape, e_vals), vars);
            tape.backward(tape.dot(tape.leaf(probe_n), h.back()));
            std::vector<Tensor> grads;
            zip_params(p, vars, [&](Tensor&, Var v) { grads.push_back(tape.grad(v)); });
            track("encoder", param_gradient_error(p, eval, grads));
        }
        {  // attention
            AttentionParams p = AttentionParams::create(kN);
            init_uniform(p, rng, 0.4);
            for (auto& v : p.v_a.values()) v = rng.uniform(-0.4, 0.4);
            const Tensor query = random_tensor(rng, {kN});
            auto eval = [&](AttentionParams& pp) {
                Tape tape;
                const AttentionVars vars = bind(tape, pp);
                const auto ctx = attention_context(tape, tape.leaf(query),
                                                   bind_all(tape, h_vals), vars);
                return tape.scalar_value(tape.dot(tape.leaf(probe_n), ctx.c));
            };
            Tape tape;
            const AttentionVars vars = bind(tape, p);
            const auto ctx = attention_context(tape, tape.leaf(query), bind_all(tape, h_vals), vars);
            tape.backward(tape.dot(tape.leaf(probe_n), ctx.c));
            std::vector<Tensor> grads;
            zip_params(p, vars, [&](Tensor&, Var v) { grads.push_back(tape.grad(v)); });
            track("attention", param_gradient_error(p, eval, grads));
        }
        {  // decoder cell + pose readout through the generator unroll
            GeneratorParams p = GeneratorParams::create(kN, kNx, kNz);
            init_uniform(p, rng, 0.4);
            auto eval = [&](GeneratorParams& pp) {
                Tape tape;
                const GeneratorVars vars = bind(tape, pp);
                const auto xs = generate(tape, bind_all(tape, h_vals), bind_all(tape, z_vals),
                                         tape.leaf(x0), vars);
                return tape.scalar_value(tape.dot(tape.leaf(probe_x), xs.back()));
            };
            Tape tape;
            const GeneratorVars vars = bind(tape, p);
            const auto xs = generate(tape, bind_all(tape, h_vals), bind_all(tape, z_vals),
                                     tape.leaf(x0), vars);
            tape.backward(tape.dot(tape.leaf(probe_x), xs.back()));
            std::vector<Tensor> grads;
            zip_params(p, vars, [&](Tensor&, Var v) { grads.push_back(tape.grad(v)); });
            track("decoder+readout", param_gradient_error(p, eval, grads));
        }
        {  // discriminator (head included)
            DiscriminatorParams p = DiscriminatorParams::create(kN, kNx, kNz);
            init_uniform(p, rng, 0.4);
            auto eval = [&](DiscriminatorParams& pp) {
                Tape tape;
                const DiscriminatorVars vars = bind(tape, pp);
                return tape.scalar_value(
                    discriminate(tape, bind_all(tape, x_vals), bind_all(tape, h_vals), vars));
            };
            Tape tape;
            const DiscriminatorVars vars = bind(tape, p);
            tape.backward(discriminate(tape, bind_all(tape, x_vals), bind_all(tape, h_vals), vars));
            std::vector<Tensor> grads;
            zip_params(p, vars, [&](Tensor&, Var v) { grads.push_back(tape.grad(v)); });
            track("discriminator", param_gradient_error(p, eval, grads));
        }
        {  // autoencoder reconstruction loss
            AutoencoderParams p = AutoencoderParams::create(kN, kNe, kNx, kNz);
            init_uniform(p, rng, 0.4);
            auto eval = [&](AutoencoderParams& pp) {
                Tape tape;
                const AutoencoderVars vars = bind(tape, pp);
                const auto e = bind_all(tape, e_vals);
                const auto x = bind_all(tape, x_vals);
                const auto outs = autoencoder_forward(tape, e, x, tape.leaf(x0), vars);
                return tape.scalar_value(
                    autoencoder_loss(tape, x, outs.x_hat, e, outs.e_hat, 1.0, 5.0));
            };
            Tape tape;
            const AutoencoderVars vars = bind(tape, p);
            const auto e = bind_all(tape, e_vals);
            const auto x = bind_all(tape, x_vals);
            const auto outs = autoencoder_forward(tape, e, x, tape.leaf(x0), vars);
            tape.backward(autoencoder_loss(tape, x, outs.x_hat, e, outs.e_hat, 1.0, 5.0));
            std::vector<Tensor> grads;
            zip_params(p, vars, [&](Tensor&, Var v) { grads.push_back(tape.grad(v)); });
            track("autoencoder-loss", param_gradient_error(p, eval, grads));
        }
        {  // both GAN value terms
            GanModel model = GanModel::create(kN, kNe, kNx, kNz);
            init_uniform(model.encoder, rng, 0.4);
            init_uniform(model.generator, rng, 0.4);
            init_uniform(model.discriminator, rng, 0.4);
            model.mean_first_pose = x0;

            // V_D with respect to D parameters.
            auto eval_d = [&](DiscriminatorParams& dp) {
                GanModel m = model;
                m.discriminator = dp;
                Tape tape;
                const EncoderVars enc = bind(tape, m.encoder);
                const GeneratorVars gen = bind(tape, m.generator);
                const DiscriminatorVars dis = bind(tape, m.discriminator);
                const auto h = encode(tape, bind_all(tape, e_vals), enc);
                const auto fake = generate(tape, h, bind_all(tape, z_vals),
                                           tape.leaf(m.mean_first_pose), gen);
                const Var y_f = discriminate(tape, fake, h, dis);
                const Var y_r = discriminate(tape, bind_all(tape, x_vals), h, dis);
                const Var one = tape.leaf(Tensor::scalar(1.0));
                return tape.scalar_value(tape.add(tape.log(y_r), tape.log(tape.sub(one, y_f))));
            };
            {
                Tape tape;
                const EncoderVars enc = bind(tape, model.encoder);
                const GeneratorVars gen = bind(tape, model.generator);
                const DiscriminatorVars dis = bind(tape, model.discriminator);
                const auto h = encode(tape, bind_all(tape, e_vals), enc);
                const auto fake = generate(tape, h, bind_all(tape, z_vals),
                                           tape.leaf(model.mean_first_pose), gen);
                const Var y_f = discriminate(tape, fake, h, dis);
                const Var y_r = discriminate(tape, bind_all(tape, x_vals), h, dis);
                const Var one = tape.leaf(Tensor::scalar(1.0));
                tape.backward(tape.add(tape.log(y_r), tape.log(tape.sub(one, y_f))));
                std::vector<Tensor> grads;
                zip_params(model.discriminator, dis,
                           [&](Tensor&, Var v) { grads.push_back(tape.grad(v)); });
                track("value-D", param_gradient_error(model.discriminator, eval_d, grads));
            }
            // V_G (non-saturating) with respect to G parameters.
            auto eval_g = [&](GeneratorParams& gp) {
                GanModel m = model;
                m.generator = gp;
                Tape tape;
                const EncoderVars enc = bind(tape, m.encoder);
                const GeneratorVars gen = bind(tape, m.generator);
                const DiscriminatorVars dis = bind(tape, m.discriminator);
                const auto h = encode(tape, bind_all(tape, e_vals), enc);
                const auto fake = generate(tape, h, bind_all(tape, z_vals),
                                           tape.leaf(m.mean_first_pose), gen);
                return tape.scalar_value(tape.log(discriminate(tape, fake, h, dis)));
            };
            {
                Tape tape;
                const EncoderVars enc = bind(tape, model.encoder);
                const GeneratorVars gen = bind(tape, model.generator);
                const DiscriminatorVars dis = bind(tape, model.discriminator);
                const auto h = encode(tape, bind_all(tape, e_vals), enc);
                const auto fake = generate(tape, h, bind_all(tape, z_vals),
                                           tape.leaf(model.mean_first_pose), gen);
                tape.backward(tape.log(discriminate(tape, fake, h, dis)));
                std::vector<Tensor> grads;
                zip_params(model.generator, gen,
                           [&](Tensor&, Var v) { grads.push_back(tape.grad(v)); });
                track("value-G", param_gradient_error(model.generator, eval_g, grads));
            }
        }
    }

    char detail[128];
    std::snprintf(detail, sizeof(detail), "worst rel err %.3g (unit: %s, %d draws, tol 1e-4)",
                  worst, failing.c_str(), kDraws);
    report(1, "gradient fidelity", worst < 1e-4, detail);
}

// ------------------------------------------------------------------ 2

void criterion_attention_distribution() {
    Rng rng(2024);
    AttentionParams params = AttentionParams::create(kN);
    init_uniform(params, rng, 0.6);
    for (auto& v : params.v_a.values()) v = rng.uniform(-0.6, 0.6);
    double worst_sum_err = 0.0;
    bool nonneg = true;
    for (int trial = 0; trial < 1000; ++trial) {
        Tape tape;
        const AttentionVars vars = bind(tape, params);
        const int Ti = 1 + static_cast<int>(rng.index(6));
        std::vector<Var> h;
        for (int i = 0; i < Ti; ++i) h.push_back(tape.leaf(random_tensor(rng, {kN}, -3.0, 3.0)));
        const auto ctx =
            attention_context(tape, tape.leaf(random_tensor(rng, {kN}, -3.0, 3.0)), h, vars);
        double total = 0.0;
        for (int i = 0; i < Ti; ++i) {
            const double a = tape.value(ctx.alpha)[i];
            if (a < 0.0) nonneg = false;
            total += a;
        }
        worst_sum_err = std::max(worst_sum_err, std::fabs(total - 1.0));
    }
    // T_i = 1 exactness.
    Tape tape;
    const AttentionVars vars = bind(tape, params);
    std::vector<Var> h = {tape.leaf(random_tensor(rng, {kN}))};
    const auto ctx = attention_context(tape, tape.leaf(random_tensor(rng, {kN})), h, vars);
    const bool single_ok = tape.value(ctx.alpha)[0] == 1.0;

    char detail[128];
    std::snprintf(detail, sizeof(detail), "max |sum-1| = %.3g over 1000 draws, single-state alpha %s",
                  worst_sum_err, single_ok ? "= 1" : "!= 1");
    report(2, "attention distribution", nonneg && worst_sum_err < 1e-12 && single_ok, detail);
}

// ---------------------------------------------------------- shared setup

struct DeskSetup {
    fs::path root;
    std::string dataset;
    std::string embeddings;
    TrainingConfig cfg = profile_config("desk");
    std::vector<DatasetRecord> records;
    Vocabulary vocab{};
    EmbeddingMatrix V{};

    explicit DeskSetup(const std::string& tag, int per_class, std::uint64_t seed) {
        root = fs::temp_directory_path() / ("t2m_acc_" + tag);
        fs::remove_all(root);
        fs::create_directories(root);
        cfg.seed = seed;
        records = generate_synthetic_dataset(default_synthetic_spec(2, per_class, 0.02, seed));
        dataset = (root / "dataset.jsonl").string();
        save_dataset(dataset, records);
        const auto corpus = sentences_of(records);
        vocab = Vocabulary::build(corpus, 1);
        SkipGramConfig sg;
        sg.n_e = cfg.n_e;
        sg.window = cfg.embed_window;
        sg.negatives = cfg.embed_negatives;
        sg.epochs = cfg.embed_epochs;
        sg.lr = cfg.embed_lr;
        sg.seed = seed;
        V = train_embeddings(corpus, vocab, sg);
        embeddings = (root / "embeddings.txt").string();
        save_embeddings(embeddings, vocab, V);
    }
    ~DeskSetup() {
        std::error_code ec;
        fs::remove_all(root, ec);
    }
};

// ------------------------------------------------------------------ 3

void criterion_autoencoder_overfit() {
    const auto start = std::chrono::steady_clock::now();
    DeskSetup setup("overfit", /*per_class=*/4, /*seed=*/5);  // 8 records
    TrainingConfig cfg = setup.cfg;
    cfg.ae_epochs = 2000;  // batch 8 over 8 records: one step per epoch
    const auto pairs = make_training_pairs(setup.records, setup.vocab, setup.V);
    const Tensor x0 = mean_first_pose_tensor(setup.records);
    const PretrainResult result = pretrain_autoencoder(pairs, x0, cfg);

    double best = result.step_loss.front();
    std::size_t best_step = 0;
    for (std::size_t s = 0; s < result.step_loss.size(); ++s) {
        if (result.step_loss[s] < best) {
            best = result.step_loss[s];
            best_step = s;
        }
        if (best < 1e-2) break;
    }
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "loss %.3g reached at step %zu of %zu (threshold 1e-2, %llds)", best,
                  best_step + 1, result.step_loss.size(), static_cast<long long>(secs));
    report(3, "autoencoder overfit", best < 1e-2, detail);
}

// ------------------------------------------- 4, 5, 6, 7: trained model

struct TrainedDesk {
    DeskSetup setup;
    GanTrainer trainer;

    TrainedDesk()
        : setup("gan", /*per_class=*/16, /*seed=*/7),
          trainer(GanModel::create(1, 1, 1, 1), 1.0, 1.0) {
        const auto pairs = make_training_pairs(setup.records, setup.vocab, setup.V);
        const Tensor x0 = mean_first_pose_tensor(setup.records);
        const PretrainResult pre = pretrain_autoencoder(pairs, x0, setup.cfg);
        Rng rng(mix_seed(setup.cfg.seed, 0x6a11));
        trainer = transfer_and_freeze(pre.params, pre.mean_first_pose, setup.cfg, rng);
        train_gan(pairs, trainer, setup.cfg);
    }
};

std::vector<double> flatten_frames(const std::vector<Tensor>& frames) {
    std::vector<double> flat;
    for (const auto& f : frames) {
        for (std::size_t i = 0; i < f.numel(); ++i) flat.push_back(f[i]);
    }
    return flat;
}

double l2(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

void criteria_trained_model() {
    const auto start = std::chrono::steady_clock::now();
    TrainedDesk desk;
    const GanModel& model = desk.trainer.model;
    const TrainingConfig& cfg = desk.setup.cfg;

    // Class means and per-class embedded sentences.
    std::vector<std::vector<std::string>> class_sentences;
    std::vector<std::vector<double>> class_means;
    std::vector<std::vector<std::vector<double>>> class_samples;
    for (const auto& rec : desk.setup.records) {
        std::size_t c = 0;
        for (; c < class_sentences.size(); ++c) {
            if (class_sentences[c] == rec.sentence) break;
        }
        if (c == class_sentences.size()) {
            class_sentences.push_back(rec.sentence);
            class_means.emplace_back();
            class_samples.emplace_back();
        }
        std::vector<double> flat;
        for (const auto& f : rec.action.frames) flat.insert(flat.end(), f.x.begin(), f.x.end());
        if (class_means[c].empty()) class_means[c].assign(flat.size(), 0.0);
        for (std::size_t i = 0; i < flat.size(); ++i) class_means[c][i] += flat[i] / 16.0;
        class_samples[c].push_back(std::move(flat));
    }

    auto embed_class = [&](std::size_t c) {
        return embed(desk.setup.vocab.encode(class_sentences[c]), desk.setup.V).vectors;
    };

    // Criterion 4: class-assignment accuracy over 50 generations per class.
    {
        Rng rng(mix_seed(cfg.seed, 0xacc4));
        int correct = 0;
        int total = 0;
        for (std::size_t c = 0; c < class_sentences.size(); ++c) {
            const auto embedded = embed_class(c);
            for (int k = 0; k < 50; ++k) {
                const auto noise = sample_noise(rng, cfg.T_o, model.n_z);
                const auto gen = flatten_frames(run_generator(model, embedded, noise,
                                                              cfg.cell_activation()));
                std::size_t best = 0;
                double best_d = l2(gen, class_means[0]);
                for (std::size_t c2 = 1; c2 < class_means.size(); ++c2) {
                    const double d = l2(gen, class_means[c2]);
                    if (d < best_d) {
                        best_d = d;
                        best = c2;
                    }
                }
                if (best == c) ++correct;
                ++total;
            }
        }
        const double accuracy = static_cast<double>(correct) / total;
        const auto mins = std::chrono::duration_cast<std::chrono::seconds>(
                              std::chrono::steady_clock::now() - start)
                              .count() /
                          60.0;
        char detail[160];
        std::snprintf(detail, sizeof(detail),
                      "accuracy %.3f over %d generations (threshold 0.9, train+eval %.1f min)",
                      accuracy, total, mins);
        report(4, "GAN desk experiment", accuracy >= 0.9, detail);
    }

    // Criterion 5: diversity under noise, and exact zero with the
    // noise paths removed.
    {
        const auto embedded = embed_class(0);
        auto pairwise = [&](const GanModel& m) {
            std::vector<std::vector<double>> gens;
            for (int k = 0; k < 10; ++k) {
                Rng rng(mix_seed(321, static_cast<std::uint64_t>(k)));  // 10 distinct seeds
                const auto noise = sample_noise(rng, cfg.T_o, m.n_z);
                gens.push_back(flatten_frames(run_generator(m, embedded, noise,
                                                            cfg.cell_activation())));
            }
            double mean = 0.0;
            int count = 0;
            for (std::size_t a = 0; a < gens.size(); ++a) {
                for (std::size_t b = a + 1; b < gens.size(); ++b) {
                    mean += l2(gens[a], gens[b]);
                    ++count;
                }
            }
            return mean / count;
        };
        const double diversity = pairwise(model);
        GanModel no_noise = model;
        no_noise.generator.cell.H_s.fill(0.0);
        no_noise.generator.cell.H_x.fill(0.0);
        const double zero_diversity = pairwise(no_noise);
        char detail[128];
        std::snprintf(detail, sizeof(detail), "mean pairwise L2 %.4g with noise, %.17g without",
                      diversity, zero_diversity);
        report(5, "diversity under noise", diversity > 0.0 && zero_diversity == 0.0, detail);
    }

    // Criterion 6: fixed noise, both class sentences map to their own
    // class.
    {
        Rng rng(mix_seed(654, 0));
        const auto noise = sample_noise(rng, cfg.T_o, model.n_z);
        bool all_match = true;
        for (std::size_t c = 0; c < class_sentences.size(); ++c) {
            const auto gen = flatten_frames(run_generator(model, embed_class(c), noise,
                                                          cfg.cell_activation()));
            std::size_t best = 0;
            double best_d = l2(gen, class_means[0]);
            for (std::size_t c2 = 1; c2 < class_means.size(); ++c2) {
                const double d = l2(gen, class_means[c2]);
                if (d < best_d) {
                    best_d = d;
                    best = c2;
                }
            }
            if (best != c) all_match = false;
        }
        report(6, "conditioning, fixed noise", all_match,
               all_match ? "each sentence maps to its own class" : "class assignments crossed");
    }

    // Criterion 7: E frozen bitwise across 100 further GAN steps.
    {
        const EncoderParams before = model.encoder;
        const auto pairs = make_training_pairs(desk.setup.records, desk.setup.vocab, desk.setup.V);
        TrainingConfig cfg100 = cfg;
        Rng rng(42);
        std::vector<TrainingPair> batch(pairs.begin(), pairs.begin() + cfg.batch_size);
        for (int s = 0; s < 100; ++s) gan_step(batch, desk.trainer, rng, cfg100);
        bool identical = true;
        visit_params(before, [&](const char* name, const Tensor& t) {
            const EncoderParams& after = desk.trainer.model.encoder;
            bool found = false;
            visit_params(after, [&](const char* name2, const Tensor& t2) {
                if (std::string(name) == name2) {
                    found = true;
                    if (!(t == t2)) identical = false;
                }
            });
            if (!found) identical = false;
        });
        report(7, "freeze contract", identical,
               identical ? "E bit-identical after 100 GAN steps" : "E drifted");
    }
}

// ------------------------------------------------------------------ 8

void criterion_data_pipeline() {
    Rng rng(88);
    bool unit_ok = true;
    double worst_unit = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        // Random raw frames with well-separated joints, built into a
        // short timed sequence, smoothed, then resampled.
        std::vector<TimedPose> timed;
        const int frames = 40;
        for (int t = 0; t < frames; ++t) {
            RawKeypointFrame f;
            f.timestamp = t * 0.1;
            for (int j = 0; j < kNumJoints; ++j) {
                f.joints[static_cast<std::size_t>(j)] = {j * 1.0 + rng.uniform(-0.3, 0.3),
                                                         rng.uniform(-1.0, 1.0),
                                                         rng.uniform(-1.0, 1.0)};
            }
            timed.push_back({f.timestamp, build_pose_vector(f)});
        }
        ActionSequence seq;
        seq.frames.reserve(timed.size());
        for (const auto& tp : timed) seq.frames.push_back(tp.pose);
        const ActionSequence smoothed = gaussian_smooth(seq, 1.0);
        for (std::size_t t = 0; t < smoothed.frames.size(); ++t) {
            timed[t].pose = smoothed.frames[t];
        }
        const ActionSequence resampled = resample(timed, 10.0, 32);
        for (const auto& f : resampled.frames) {
            worst_unit = std::max(worst_unit, f.max_unit_norm_error());
        }
        if (worst_unit > 1e-9) {
            unit_ok = false;
            break;
        }
    }

    // save/load round-trip within 1e-12.
    const auto records = generate_synthetic_dataset(default_synthetic_spec(2, 4, 0.02, 11));
    const fs::path path = fs::temp_directory_path() / "t2m_acc_roundtrip.jsonl";
    save_dataset(path.string(), records);
    const auto loaded = load_dataset(path.string());
    double worst_rt = 0.0;
    for (std::size_t r = 0; r < records.size(); ++r) {
        for (int t = 0; t < records[r].action.length(); ++t) {
            for (int i = 0; i < kPoseDim; ++i) {
                worst_rt = std::max(
                    worst_rt,
                    std::fabs(
                        records[r].action.frames[static_cast<std::size_t>(t)].x[static_cast<std::size_t>(i)] -
                        loaded[r].action.frames[static_cast<std::size_t>(t)].x[static_cast<std::size_t>(i)]));
            }
        }
    }
    fs::remove(path);

    // speed_limit: exhaustive per-frame scan.
    bool speed_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        JointTrajectory traj;
        traj.fps = 10.0;
        for (int t = 0; t < 30; ++t) {
            SkeletonPose p;
            for (int j = 0; j < kNumJoints; ++j) {
                p.joints[static_cast<std::size_t>(j)] = {rng.uniform(-1, 1) + 0.3 * t,
                                                         rng.uniform(-1, 1), rng.uniform(-1, 1)};
            }
            traj.frames.push_back(p);
        }
        const double limit = 0.5 + rng.uniform(0.0, 2.0);
        const JointTrajectory out = speed_limit(traj, limit);
        const double bound = limit / out.fps + 1e-9;
        for (std::size_t t = 1; t < out.frames.size(); ++t) {
            for (int j = 0; j < kNumJoints; ++j) {
                const Vec3& a = out.frames[t - 1].joints[static_cast<std::size_t>(j)];
                const Vec3& b = out.frames[t].joints[static_cast<std::size_t>(j)];
                const double d = std::sqrt((b[0] - a[0]) * (b[0] - a[0]) +
                                           (b[1] - a[1]) * (b[1] - a[1]) +
                                           (b[2] - a[2]) * (b[2] - a[2]));
                if (d > bound) speed_ok = false;
            }
        }
    }

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "unit-norm err %.3g (tol 1e-9), round-trip err %.3g (tol 1e-12), speed scan %s",
                  worst_unit, worst_rt, speed_ok ? "clean" : "violated");
    report(8, "data-pipeline invariants", unit_ok && worst_rt < 1e-12 && speed_ok, detail);
}

// ------------------------------------------------------------------ 9

void criterion_determinism() {
    const fs::path root = fs::temp_directory_path() / "t2m_acc_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::string cfg_path = (root / "cfg.json").string();
    {
        std::ofstream os(cfg_path);
        os << R"({"n": 8, "n_e": 4, "n_z": 2, "T_o": 8, "batch_size": 4,
                  "ae_epochs": 20, "ae_lr": 0.003, "gan_epochs": 2,
                  "embed_epochs": 8, "seed": 13})";
    }
    auto run_pipeline = [&](const std::string& tag) {
        const std::string dir = (root / tag).string();
        std::ostringstream out, err;
        auto cli = [&](std::vector<std::string> args) {
            const int code = cli::run_cli(args, out, err);
            if (code != 0) {
                throw InputError("pipeline command failed: " + err.str());
            }
        };
        cli({"synth", "--config", cfg_path, "--per-class", "4", "--out", dir + "/data"});
        cli({"train-embeddings", "--config", cfg_path, "--dataset", dir + "/data/dataset.jsonl",
             "--out", dir + "/emb"});
        cli({"pretrain", "--config", cfg_path, "--dataset", dir + "/data/dataset.jsonl",
             "--embeddings", dir + "/emb/embeddings.txt", "--out", dir + "/ae"});
        cli({"train-gan", "--config", cfg_path, "--autoencoder", dir + "/ae/autoencoder.ckpt",
             "--dataset", dir + "/data/dataset.jsonl", "--embeddings",
             dir + "/emb/embeddings.txt", "--out", dir + "/gan"});
        cli({"generate", "--config", cfg_path, "--checkpoint", dir + "/gan/gan.ckpt",
             "--embeddings", dir + "/emb/embeddings.txt", "--sentence",
             "a person raises the left arm", "--num-samples", "2", "--out", dir + "/gen"});
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream is(p, std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        return ss.str();
    };
    bool pass = true;
    std::string detail = "pretrain loss csv, gan metrics csv, and generated files byte-identical";
    try {
        run_pipeline("run1");
        run_pipeline("run2");
        for (const char* rel :
             {"ae/pretrain_loss.csv", "gan/gan_metrics.csv", "gen/gen_000.jsonl",
              "gen/gen_001.jsonl"}) {
            if (slurp(root / "run1" / rel) != slurp(root / "run2" / rel)) {
                pass = false;
                detail = std::string("files differ: ") + rel;
            }
        }
    } catch (const std::exception& e) {
        pass = false;
        detail = e.what();
    }
    fs::remove_all(root);
    report(9, "pipeline determinism", pass, detail);
}

// ----------------------------------------------------------------- 10

void criterion_paper_profile() {
    const TrainingConfig cfg = profile_config("paper");
    const bool pass = cfg.n == 256 && cfg.n_z == 16 && cfg.batch_size == 32 &&
                      cfg.ae_epochs == 250 && cfg.gan_epochs == 400 && cfg.ae_lr == 5e-5 &&
                      cfg.alpha_d == 2e-6 && cfg.alpha_g == 2e-6 && cfg.a1 == 1.0 &&
                      cfg.a2 == 5.0 && cfg.T_o == 32 && cfg.fps == 10.0 && cfg.n_x == 24;
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "n=%d n_z=%d B=%d epochs=%d/%d lr=%g alpha=%g/%g a1=%g a2=%g T_o=%d @ %g fps",
                  cfg.n, cfg.n_z, cfg.batch_size, cfg.ae_epochs, cfg.gan_epochs, cfg.ae_lr,
                  cfg.alpha_d, cfg.alpha_g, cfg.a1, cfg.a2, cfg.T_o, cfg.fps);
    report(10, "paper-profile parity", pass, detail);
}

}  // namespace

int main() {
    criterion_gradient_fidelity();
    criterion_attention_distribution();
    criterion_autoencoder_overfit();
    criteria_trained_model();
    criterion_data_pipeline();
    criterion_determinism();
    criterion_paper_profile();
    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
