#include "t2m_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "t2m/autoencoder.hpp"
#include "t2m/dataset.hpp"
#include "t2m/embedding.hpp"
#include "t2m/errors.hpp"
#include "t2m/gan.hpp"
#include "t2m/pose.hpp"

namespace t2m::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json run_config_json(const RunConfig& rc) {
    const TrainingConfig& t = rc.train;
    ordered_json j;
    j["profile"] = t.profile;
    j["n"] = t.n;
    j["n_e"] = t.n_e;
    j["n_x"] = t.n_x;
    j["n_z"] = t.n_z;
    j["T_o"] = t.T_o;
    j["fps"] = t.fps;
    j["ae_epochs"] = t.ae_epochs;
    j["ae_lr"] = t.ae_lr;
    j["a1"] = t.a1;
    j["a2"] = t.a2;
    j["gan_epochs"] = t.gan_epochs;
    j["alpha_d"] = t.alpha_d;
    j["alpha_g"] = t.alpha_g;
    j["batch_size"] = t.batch_size;
    j["seed"] = t.seed;
    j["init_scale"] = t.init_scale;
    j["prob_clamp"] = t.prob_clamp;
    j["cell_state_activation"] = t.cell_state_activation;
    j["checkpoint_every"] = t.checkpoint_every;
    j["embed_window"] = t.embed_window;
    j["embed_negatives"] = t.embed_negatives;
    j["embed_epochs"] = t.embed_epochs;
    j["embed_lr"] = t.embed_lr;
    j["embed_min_count"] = t.embed_min_count;
    j["eval_generations"] = t.eval_generations;
    j["dataset"] = rc.dataset;
    j["embeddings"] = rc.embeddings;
    j["autoencoder"] = rc.autoencoder;
    j["checkpoint"] = rc.checkpoint;
    j["input"] = rc.input;
    j["out"] = rc.out;
    j["classes"] = rc.classes;
    j["per_class"] = rc.per_class;
    j["noise_scale"] = rc.noise_scale;
    j["sentence"] = rc.sentence;
    j["num_samples"] = rc.num_samples;
    j["skeleton"] = rc.skeleton;
    j["bone_lengths"] = rc.bone_lengths;
    j["max_speed"] = rc.max_speed;
    return j;
}

void apply_config_json(const ordered_json& j, RunConfig& rc) {
    TrainingConfig& t = rc.train;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "profile") t.profile = value.get<std::string>();
            else if (key == "n") t.n = value.get<int>();
            else if (key == "n_e") t.n_e = value.get<int>();
            else if (key == "n_x") t.n_x = value.get<int>();
            else if (key == "n_z") t.n_z = value.get<int>();
            else if (key == "T_o") t.T_o = value.get<int>();
            else if (key == "fps") t.fps = value.get<double>();
            else if (key == "ae_epochs") t.ae_epochs = value.get<int>();
            else if (key == "ae_lr") t.ae_lr = value.get<double>();
            else if (key == "a1") t.a1 = value.get<double>();
            else if (key == "a2") t.a2 = value.get<double>();
            else if (key == "gan_epochs") t.gan_epochs = value.get<int>();
            else if (key == "alpha_d") t.alpha_d = value.get<double>();
            else if (key == "alpha_g") t.alpha_g = value.get<double>();
            else if (key == "batch_size") t.batch_size = value.get<int>();
            else if (key == "seed") t.seed = value.get<std::uint64_t>();
            else if (key == "init_scale") t.init_scale = value.get<double>();
            else if (key == "prob_clamp") t.prob_clamp = value.get<double>();
            else if (key == "cell_state_activation") t.cell_state_activation = value.get<std::string>();
            else if (key == "checkpoint_every") t.checkpoint_every = value.get<int>();
            else if (key == "embed_window") t.embed_window = value.get<int>();
            else if (key == "embed_negatives") t.embed_negatives = value.get<int>();
            else if (key == "embed_epochs") t.embed_epochs = value.get<int>();
            else if (key == "embed_lr") t.embed_lr = value.get<double>();
            else if (key == "embed_min_count") t.embed_min_count = value.get<int>();
            else if (key == "eval_generations") t.eval_generations = value.get<int>();
            else if (key == "dataset") rc.dataset = value.get<std::string>();
            else if (key == "embeddings") rc.embeddings = value.get<std::string>();
            else if (key == "autoencoder") rc.autoencoder = value.get<std::string>();
            else if (key == "checkpoint") rc.checkpoint = value.get<std::string>();
            else if (key == "input") rc.input = value.get<std::string>();
            else if (key == "out") rc.out = value.get<std::string>();
            else if (key == "classes") rc.classes = value.get<int>();
            else if (key == "per_class") rc.per_class = value.get<int>();
            else if (key == "noise_scale") rc.noise_scale = value.get<double>();
            else if (key == "sentence") rc.sentence = value.get<std::string>();
            else if (key == "num_samples") rc.num_samples = value.get<int>();
            else if (key == "skeleton") rc.skeleton = value.get<bool>();
            else if (key == "bone_lengths") rc.bone_lengths = value.get<std::vector<double>>();
            else if (key == "max_speed") rc.max_speed = value.get<double>();
            else throw InputError("config: unknown key '" + key + "'");
        } catch (const nlohmann::json::exception& e) {
            throw InputError("config: bad value for '" + key + "': " + e.what());
        }
    }
}

void write_resolved_config(const RunConfig& rc, const std::string& command) {
    const fs::path path = fs::path(rc.out) / (command + ".config.json");
    std::ofstream os(path);
    if (!os) throw InputError("cannot write resolved config to '" + path.string() + "'");
    os << run_config_json(rc).dump(2) << '\n';
}

void ensure_out_dir(const RunConfig& rc) {
    std::error_code ec;
    fs::create_directories(rc.out, ec);
    if (ec) throw InputError("cannot create output directory '" + rc.out + "': " + ec.message());
}

void require_inputs(std::initializer_list<std::pair<const char*, const std::string*>> inputs) {
    std::string missing;
    for (const auto& [flag, path] : inputs) {
        if (path->empty() || !fs::exists(*path)) {
            missing += std::string("\n  ") + flag + ": '" + *path + "'";
        }
    }
    if (!missing.empty()) throw InputError("missing input file(s):" + missing);
}

void echo_config(std::ostream& out, const char* command, const RunConfig& rc) {
    const TrainingConfig& t = rc.train;
    out << "[" << command << "] profile=" << t.profile << " n=" << t.n << " n_e=" << t.n_e
        << " n_x=" << t.n_x << " n_z=" << t.n_z << " T_o=" << t.T_o << " B=" << t.batch_size
        << " ae_epochs=" << t.ae_epochs << " ae_lr=" << t.ae_lr << " gan_epochs=" << t.gan_epochs
        << " alpha_D=" << t.alpha_d << " alpha_G=" << t.alpha_g << " a1=" << t.a1
        << " a2=" << t.a2 << " seed=" << t.seed << "\n";
}

std::string sample_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "gen_%03d", index);
    return buf;
}

// ---------------------------------------------------------------- synth

int cmd_synth(const RunConfig& rc, std::ostream& out) {
    ensure_out_dir(rc);
    SyntheticSpec spec = default_synthetic_spec(rc.classes, rc.per_class, rc.noise_scale,
                                                rc.train.seed);
    spec.frames = rc.train.T_o;
    spec.fps = rc.train.fps;
    const auto records = generate_synthetic_dataset(spec);
    const fs::path path = fs::path(rc.out) / "dataset.jsonl";
    save_dataset(path.string(), records);
    write_resolved_config(rc, "synth");
    out << "wrote " << records.size() << " records to " << path.string() << "\n";
    for (const auto& cls : spec.classes) {
        out << "  class " << cls.name << ": " << spec.per_class << " samples, sentence \""
            << cls.sentence << "\"\n";
    }
    return 0;
}

// ---------------------------------------------------- train-embeddings

int cmd_train_embeddings(const RunConfig& rc, std::ostream& out) {
    require_inputs({{"--dataset", &rc.dataset}});
    ensure_out_dir(rc);
    const auto records = load_dataset(rc.dataset);
    const auto corpus = sentences_of(records);
    const Vocabulary vocab = Vocabulary::build(corpus, rc.train.embed_min_count);
    SkipGramConfig cfg;
    cfg.n_e = rc.train.n_e;
    cfg.window = rc.train.embed_window;
    cfg.negatives = rc.train.embed_negatives;
    cfg.epochs = rc.train.embed_epochs;
    cfg.lr = rc.train.embed_lr;
    cfg.seed = rc.train.seed;
    const EmbeddingMatrix V = train_embeddings(corpus, vocab, cfg);
    const fs::path path = fs::path(rc.out) / "embeddings.txt";
    save_embeddings(path.string(), vocab, V);
    write_resolved_config(rc, "train-embeddings");
    out << "trained embeddings: d=" << vocab.size() << " n_e=" << V.n_e << " -> " << path.string()
        << "\n";
    return 0;
}

// -------------------------------------------------------------- pretrain

int cmd_pretrain(const RunConfig& rc, std::ostream& out) {
    echo_config(out, "pretrain", rc);
    require_inputs({{"--dataset", &rc.dataset}, {"--embeddings", &rc.embeddings}});
    ensure_out_dir(rc);
    const auto records = load_dataset(rc.dataset);
    const auto [vocab, V] = load_embeddings(rc.embeddings);
    if (V.n_e != rc.train.n_e) {
        throw InputError("dimension mismatch: embeddings have n_e=" + std::to_string(V.n_e) +
                         " but config expects n_e=" + std::to_string(rc.train.n_e));
    }
    const auto pairs = make_training_pairs(records, vocab, V);
    const Tensor x0 = mean_first_pose_tensor(records);
    write_resolved_config(rc, "pretrain");

    const PretrainResult result = pretrain_autoencoder(pairs, x0, rc.train);

    const fs::path ckpt = fs::path(rc.out) / "autoencoder.ckpt";
    save_autoencoder_checkpoint(ckpt.string(), result.params, result.mean_first_pose, rc.train);
    const fs::path csv = fs::path(rc.out) / "pretrain_loss.csv";
    {
        std::ofstream os(csv);
        if (!os) throw InputError("cannot write '" + csv.string() + "'");
        os << "epoch,loss\n";
        char buf[64];
        for (std::size_t i = 0; i < result.epoch_loss.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, result.epoch_loss[i]);
            os << buf;
        }
    }
    out << "pretrained autoencoder: final epoch loss=" << result.epoch_loss.back() << " -> "
        << ckpt.string() << "\n";
    return 0;
}

// -------------------------------------------------------------- train-gan

int cmd_train_gan(const RunConfig& rc, std::ostream& out) {
    echo_config(out, "train-gan", rc);
    require_inputs({{"--autoencoder", &rc.autoencoder},
                    {"--dataset", &rc.dataset},
                    {"--embeddings", &rc.embeddings}});
    ensure_out_dir(rc);
    const AutoencoderCheckpoint ae = load_autoencoder_checkpoint(rc.autoencoder);
    auto check_dim = [](const char* name, int ckpt, int cfg) {
        if (ckpt != cfg) {
            throw InputError(std::string("dimension mismatch: checkpoint has ") + name + "=" +
                             std::to_string(ckpt) + " but config expects " + name + "=" +
                             std::to_string(cfg));
        }
    };
    check_dim("n", ae.n, rc.train.n);
    check_dim("n_e", ae.n_e, rc.train.n_e);
    check_dim("n_x", ae.n_x, rc.train.n_x);
    check_dim("n_z", ae.n_z, rc.train.n_z);

    const auto records = load_dataset(rc.dataset);
    const auto [vocab, V] = load_embeddings(rc.embeddings);
    check_dim("n_e", V.n_e, rc.train.n_e);
    const auto pairs = make_training_pairs(records, vocab, V);
    write_resolved_config(rc, "train-gan");

    Rng init_rng(mix_seed(rc.train.seed, 0x6a11));
    GanTrainer trainer = transfer_and_freeze(ae.params, ae.mean_first_pose, rc.train, init_rng);

    const fs::path csv = fs::path(rc.out) / "gan_metrics.csv";
    std::ofstream metrics(csv);
    if (!metrics) throw InputError("cannot write '" + csv.string() + "'");
    metrics << kMetricCsvHeader << "\n";
    const int cadence = rc.train.checkpoint_every;
    train_gan(pairs, trainer, rc.train, [&](const GanTrainer& t, const StepMetrics& m) {
        metrics << metric_csv_row(m) << "\n";
        if (cadence > 0 && m.step % cadence == 0) {
            const fs::path step_ckpt =
                fs::path(rc.out) / ("gan_step_" + std::to_string(m.step) + ".ckpt");
            save_gan_checkpoint(step_ckpt.string(), t, rc.train);
        }
    });
    metrics.close();

    const fs::path ckpt = fs::path(rc.out) / "gan.ckpt";
    save_gan_checkpoint(ckpt.string(), trainer, rc.train);
    out << "trained GAN for " << trainer.step << " steps -> " << ckpt.string() << "\n";
    return 0;
}

// --------------------------------------------------------------- generate

std::vector<Tensor> embed_sentence_checked(const std::string& sentence, const Vocabulary& vocab,
                                           const EmbeddingMatrix& V, std::ostream& err) {
    const auto tokens = tokenize(sentence);
    if (tokens.empty()) throw InputError("generate: sentence has no tokens");
    for (const auto& tok : tokens) {
        if (!vocab.contains(tok)) {
            err << "warning: out-of-vocabulary token '" << tok << "' mapped to "
                << Vocabulary::kUnknown << "\n";
        }
    }
    return embed(vocab.encode(tokens), V).vectors;
}

JointTrajectory skeleton_trajectory(const std::vector<PoseVector>& frames, double fps,
                                    const std::vector<double>& bone_lengths, double max_speed) {
    JointTrajectory traj;
    traj.fps = fps;
    traj.frames.reserve(frames.size());
    for (const auto& pose : frames) {
        traj.frames.push_back(fit_to_skeleton(normalize_joints(pose.x), bone_lengths));
    }
    return speed_limit(traj, max_speed);
}

int cmd_generate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    require_inputs({{"--checkpoint", &rc.checkpoint}, {"--embeddings", &rc.embeddings}});
    if (rc.num_samples < 1) throw InputError("generate: --num-samples must be >= 1");
    ensure_out_dir(rc);
    const GanTrainer trainer = load_gan_checkpoint(rc.checkpoint, rc.train);
    const GanModel& model = trainer.model;
    const auto [vocab, V] = load_embeddings(rc.embeddings);
    if (V.n_e != model.n_e) {
        throw InputError("dimension mismatch: embeddings have n_e=" + std::to_string(V.n_e) +
                         " but checkpoint expects n_e=" + std::to_string(model.n_e));
    }
    const auto embedded = embed_sentence_checked(rc.sentence, vocab, V, err);
    const auto tokens = tokenize(rc.sentence);
    write_resolved_config(rc, "generate");

    const CellStateActivation act = rc.train.cell_activation();
    for (int i = 0; i < rc.num_samples; ++i) {
        Rng rng(mix_seed(rc.train.seed, static_cast<std::uint64_t>(i)));
        const auto noise = sample_noise(rng, rc.train.T_o, model.n_z);
        const auto frames = run_generator(model, embedded, noise, act);
        DatasetRecord rec;
        rec.id = sample_name(i);
        rec.sentence = tokens;
        rec.action.fps = rc.train.fps;
        for (const auto& f : frames) rec.action.frames.push_back(PoseVector::from_tensor(f));
        const fs::path path = fs::path(rc.out) / (sample_name(i) + ".jsonl");
        const std::vector<DatasetRecord> one = {rec};
        save_dataset(path.string(), one);
        out << "wrote " << path.string() << "\n";
        if (rc.skeleton) {
            const JointTrajectory traj = skeleton_trajectory(rec.action.frames, rc.train.fps,
                                                             rc.bone_lengths, rc.max_speed);
            const fs::path traj_path = fs::path(rc.out) / (sample_name(i) + "_trajectory.csv");
            write_trajectory_csv(traj_path.string(), traj);
            out << "wrote " << traj_path.string() << "\n";
        }
    }
    return 0;
}

// --------------------------------------------------------------- evaluate

struct ClassEval {
    std::string sentence;
    std::vector<std::size_t> record_indices;
    std::vector<double> mean_trajectory;  // flattened T_o * 24
};

std::vector<double> flatten(const ActionSequence& a) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(a.length()) * kPoseDim);
    for (const auto& f : a.frames) flat.insert(flat.end(), f.x.begin(), f.x.end());
    return flat;
}

std::vector<double> flatten(const std::vector<Tensor>& frames) {
    std::vector<double> flat;
    for (const auto& f : frames) {
        for (std::size_t i = 0; i < f.numel(); ++i) flat.push_back(f[i]);
    }
    return flat;
}

double l2(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

int cmd_evaluate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    require_inputs({{"--checkpoint", &rc.checkpoint},
                    {"--dataset", &rc.dataset},
                    {"--embeddings", &rc.embeddings}});
    ensure_out_dir(rc);
    const GanTrainer trainer = load_gan_checkpoint(rc.checkpoint, rc.train);
    const GanModel& model = trainer.model;
    const auto [vocab, V] = load_embeddings(rc.embeddings);
    const auto records = load_dataset(rc.dataset);
    write_resolved_config(rc, "evaluate");

    // Group records into classes by their sentence.
    std::vector<ClassEval> classes;
    for (std::size_t i = 0; i < records.size(); ++i) {
        std::string key;
        for (const auto& tok : records[i].sentence) key += tok + " ";
        auto it = std::find_if(classes.begin(), classes.end(),
                               [&](const ClassEval& c) { return c.sentence == key; });
        if (it == classes.end()) {
            classes.push_back({key, {i}, {}});
        } else {
            it->record_indices.push_back(i);
        }
    }
    if (classes.size() < 2) {
        err << "warning: evaluation dataset has " << classes.size()
            << " distinct sentence(s); accuracy is trivial\n";
    }
    for (auto& cls : classes) {
        std::vector<double> mean;
        for (std::size_t idx : cls.record_indices) {
            const auto flat = flatten(records[idx].action);
            if (mean.empty()) mean.assign(flat.size(), 0.0);
            for (std::size_t i = 0; i < flat.size(); ++i) {
                mean[i] += flat[i] / static_cast<double>(cls.record_indices.size());
            }
        }
        cls.mean_trajectory = std::move(mean);
    }

    const CellStateActivation act = rc.train.cell_activation();
    const int k = rc.train.eval_generations;
    Rng rng(mix_seed(rc.train.seed, 0xe7a1));
    int correct = 0;
    int total = 0;
    double diversity_sum = 0.0;
    double proximity_sum = 0.0;
    ordered_json per_class = ordered_json::object();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& cls = classes[c];
        const auto embedded =
            embed(vocab.encode(records[cls.record_indices[0]].sentence), V).vectors;
        std::vector<std::vector<double>> gens;
        gens.reserve(static_cast<std::size_t>(k));
        int class_correct = 0;
        double class_proximity = 0.0;
        for (int g = 0; g < k; ++g) {
            const auto noise = sample_noise(rng, rc.train.T_o, model.n_z);
            const auto frames = run_generator(model, embedded, noise, act);
            gens.push_back(flatten(frames));
            // Nearest class mean.
            std::size_t best = 0;
            double best_dist = l2(gens.back(), classes[0].mean_trajectory);
            for (std::size_t c2 = 1; c2 < classes.size(); ++c2) {
                const double d = l2(gens.back(), classes[c2].mean_trajectory);
                if (d < best_dist) {
                    best_dist = d;
                    best = c2;
                }
            }
            if (best == c) ++class_correct;
            // Distance to the nearest training sample of the correct class.
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t idx : cls.record_indices) {
                nearest = std::min(nearest, l2(gens.back(), flatten(records[idx].action)));
            }
            class_proximity += nearest / k;
        }
        double class_diversity = 0.0;
        int pairs = 0;
        for (std::size_t a = 0; a < gens.size(); ++a) {
            for (std::size_t b = a + 1; b < gens.size(); ++b) {
                class_diversity += l2(gens[a], gens[b]);
                ++pairs;
            }
        }
        if (pairs > 0) class_diversity /= pairs;
        correct += class_correct;
        total += k;
        diversity_sum += class_diversity / static_cast<double>(classes.size());
        proximity_sum += class_proximity / static_cast<double>(classes.size());
        ordered_json cj;
        cj["sentence"] = cls.sentence;
        cj["accuracy"] = static_cast<double>(class_correct) / k;
        cj["diversity"] = class_diversity;
        cj["data_proximity"] = class_proximity;
        per_class["class_" + std::to_string(c)] = std::move(cj);
    }

    ordered_json report;
    report["num_classes"] = classes.size();
    report["generations_per_class"] = k;
    report["accuracy"] = total > 0 ? static_cast<double>(correct) / total : 0.0;
    report["diversity"] = diversity_sum;
    report["data_proximity"] = proximity_sum;
    report["per_class"] = std::move(per_class);

    const fs::path path = fs::path(rc.out) / "evaluation.json";
    std::ofstream os(path);
    if (!os) throw InputError("cannot write '" + path.string() + "'");
    os << report.dump(2) << '\n';
    out << "accuracy=" << report["accuracy"] << " diversity=" << report["diversity"]
        << " data_proximity=" << report["data_proximity"] << " -> " << path.string() << "\n";
    return 0;
}

// ------------------------------------------------------- export-trajectory

int cmd_export_trajectory(const RunConfig& rc, std::ostream& out) {
    require_inputs({{"--input", &rc.input}});
    ensure_out_dir(rc);
    // Generated files hold raw poses; normalize before fitting.
    const auto records = load_dataset(rc.input, /*validate_poses=*/false);
    if (records.empty()) throw InputError("export-trajectory: no records in '" + rc.input + "'");
    write_resolved_config(rc, "export-trajectory");
    for (const auto& rec : records) {
        const JointTrajectory traj = skeleton_trajectory(rec.action.frames, rec.action.fps,
                                                         rc.bone_lengths, rc.max_speed);
        const fs::path path = fs::path(rc.out) / (rec.id + "_trajectory.csv");
        write_trajectory_csv(path.string(), traj);
        out << "wrote " << path.string() << " (" << traj.frames.size() << " frames)\n";
    }
    return 0;
}

// ----------------------------------------------------------------- driver

// First pass over raw args: resolve --profile and --config before the
// full parse so that explicit flags override both.
void preresolve(const std::vector<std::string>& args, RunConfig& rc) {
    auto value_of = [&](std::size_t& i, const std::string& arg,
                        const std::string& name) -> std::string {
        if (arg == name) {
            if (i + 1 >= args.size()) throw InputError(name + " needs a value");
            return args[++i];
        }
        if (arg.rfind(name + "=", 0) == 0) return arg.substr(name.size() + 1);
        return {};
    };
    std::string profile;
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (auto v = value_of(i, args[i], "--profile"); !v.empty()) profile = v;
        else if (auto c = value_of(i, args[i], "--config"); !c.empty()) config_path = c;
    }
    // Profile inside the config file applies first, unless the flag
    // also names one.
    ordered_json file_json;
    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) throw InputError("cannot open config file '" + config_path + "'");
        try {
            is >> file_json;
        } catch (const nlohmann::json::exception& e) {
            throw InputError("config file '" + config_path + "': " + e.what());
        }
        if (!file_json.is_object()) {
            throw InputError("config file '" + config_path + "' must hold a JSON object");
        }
        if (profile.empty() && file_json.contains("profile")) {
            profile = file_json["profile"].get<std::string>();
        }
    }
    if (!profile.empty()) rc.train = profile_config(profile);
    if (!file_json.is_null()) apply_config_json(file_json, rc);
    if (!profile.empty()) rc.train.profile = profile;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig rc;
    preresolve(args, rc);

    CLI::App app{"text2motion: sentence-conditioned 3D upper-body motion synthesis"};
    app.require_subcommand(1);
    std::string profile_flag;
    std::string config_flag;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_flag, "JSON config file (flat key-value object)");
        cmd->add_option("--profile", profile_flag, "named profile: desk or paper");
        cmd->add_option("--seed", rc.train.seed, "global RNG seed");
        cmd->add_option("--out", rc.out, "output directory");
    };

    CLI::App* synth = app.add_subcommand("synth", "write a synthetic sentence/action dataset");
    add_common(synth);
    synth->add_option("--classes", rc.classes, "number of synthetic classes");
    synth->add_option("--per-class", rc.per_class, "samples per class");
    synth->add_option("--noise-scale", rc.noise_scale, "joint jitter stddev");

    CLI::App* emb = app.add_subcommand("train-embeddings", "train skip-gram word embeddings");
    add_common(emb);
    emb->add_option("--dataset", rc.dataset, "dataset JSONL path");
    emb->add_option("--n-e", rc.train.n_e, "embedding dimension");
    emb->add_option("--epochs", rc.train.embed_epochs, "skip-gram epochs");

    CLI::App* pre = app.add_subcommand("pretrain", "pretrain the language/action autoencoder");
    add_common(pre);
    pre->add_option("--dataset", rc.dataset, "dataset JSONL path");
    pre->add_option("--embeddings", rc.embeddings, "embedding file path");
    pre->add_option("--epochs", rc.train.ae_epochs, "autoencoder epochs");
    pre->add_option("--lr", rc.train.ae_lr, "autoencoder learning rate");

    CLI::App* gan = app.add_subcommand("train-gan", "adversarial training from a pretrained autoencoder");
    add_common(gan);
    gan->add_option("--autoencoder", rc.autoencoder, "autoencoder checkpoint path");
    gan->add_option("--dataset", rc.dataset, "dataset JSONL path");
    gan->add_option("--embeddings", rc.embeddings, "embedding file path");
    gan->add_option("--epochs", rc.train.gan_epochs, "GAN epochs");
    gan->add_option("--checkpoint-every", rc.train.checkpoint_every,
                    "checkpoint cadence in steps (0 = final only)");

    CLI::App* gen = app.add_subcommand("generate", "generate action sequences for a sentence");
    add_common(gen);
    gen->add_option("--checkpoint", rc.checkpoint, "GAN checkpoint path");
    gen->add_option("--embeddings", rc.embeddings, "embedding file path");
    gen->add_option("--sentence", rc.sentence, "input sentence")->required();
    gen->add_option("--num-samples", rc.num_samples, "independent samples to draw");
    gen->add_flag("--skeleton", rc.skeleton, "also write fitted joint trajectories");
    gen->add_option("--bone-lengths", rc.bone_lengths, "seven bone lengths")->expected(7);
    gen->add_option("--max-speed", rc.max_speed, "joint speed limit (units/s)");

    CLI::App* eval = app.add_subcommand("evaluate", "desk-scale metrics of a trained model");
    add_common(eval);
    eval->add_option("--checkpoint", rc.checkpoint, "GAN checkpoint path");
    eval->add_option("--dataset", rc.dataset, "labeled dataset JSONL path");
    eval->add_option("--embeddings", rc.embeddings, "embedding file path");
    eval->add_option("--generations", rc.train.eval_generations, "generations per class");

    CLI::App* exp = app.add_subcommand("export-trajectory", "action file to joint-trajectory CSV");
    add_common(exp);
    exp->add_option("--input", rc.input, "action JSONL file (dataset or generated)");
    exp->add_option("--bone-lengths", rc.bone_lengths, "seven bone lengths")->expected(7);
    exp->add_option("--max-speed", rc.max_speed, "joint speed limit (units/s)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    if (synth->parsed()) return cmd_synth(rc, out);
    if (emb->parsed()) return cmd_train_embeddings(rc, out);
    if (pre->parsed()) return cmd_pretrain(rc, out);
    if (gan->parsed()) return cmd_train_gan(rc, out);
    if (gen->parsed()) return cmd_generate(rc, out, err);
    if (eval->parsed()) return cmd_evaluate(rc, out, err);
    if (exp->parsed()) return cmd_export_trajectory(rc, out);
    return 1;
}

}  // namespace

std::string run_config_to_json(const RunConfig& rc) { return run_config_json(rc).dump(2); }

void apply_json_to_run_config(const std::string& json_text, RunConfig& rc) {
    apply_config_json(ordered_json::parse(json_text), rc);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace t2m::cli
