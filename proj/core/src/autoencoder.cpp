#include "t2m/autoencoder.hpp"

#include <cmath>

#include "t2m/errors.hpp"
#include "t2m/params_io.hpp"

namespace t2m {

std::vector<TrainingPair> make_training_pairs(std::span<const DatasetRecord> records,
                                              const Vocabulary& vocab, const EmbeddingMatrix& V) {
    std::vector<TrainingPair> pairs;
    pairs.reserve(records.size());
    for (const auto& rec : records) {
        TrainingPair p;
        p.id = rec.id;
        const EmbeddedSentence sent = embed(vocab.encode(rec.sentence), V);
        p.embedding = sent.vectors;
        p.action.reserve(rec.action.frames.size());
        for (const auto& frame : rec.action.frames) p.action.push_back(frame.to_tensor());
        pairs.push_back(std::move(p));
    }
    return pairs;
}

Tensor mean_first_pose_tensor(std::span<const DatasetRecord> records) {
    std::vector<ActionSequence> actions;
    actions.reserve(records.size());
    for (const auto& r : records) actions.push_back(r.action);
    return mean_first_pose(actions).to_tensor();
}

AutoencoderParams AutoencoderParams::create(int n, int n_e, int n_x, int n_z) {
    AutoencoderParams p;
    p.n = n;
    p.n_e = n_e;
    p.n_x = n_x;
    p.n_z = n_z;
    p.text_encoder = EncoderParams::create(n, n_e);
    p.t2a_attention = AttentionParams::create(n);
    p.t2a_cell = DecoderCellParams::create(n, n_x, n_z);
    p.pose_readout = ReadoutParams::create(n_x, n);
    p.action_encoder = EncoderParams::create(n, n_x);
    p.a2t_attention = AttentionParams::create(n);
    p.a2t_cell = DecoderCellParams::create(n, n_e, n_z);
    p.embedding_readout = ReadoutParams::create(n_e, n);
    return p;
}

void init_uniform(AutoencoderParams& p, Rng& rng, double scale) {
    init_uniform(p.text_encoder, rng, scale);
    init_uniform(p.t2a_attention, rng, scale);
    init_uniform(p.t2a_cell, rng, scale);
    init_uniform(p.pose_readout, rng, scale);
    init_uniform(p.action_encoder, rng, scale);
    init_uniform(p.a2t_attention, rng, scale);
    init_uniform(p.a2t_cell, rng, scale);
    init_uniform(p.embedding_readout, rng, scale);
}

AutoencoderVars bind(Tape& tape, const AutoencoderParams& p) {
    AutoencoderVars v;
    v.text_encoder = bind(tape, p.text_encoder);
    v.t2a_attention = bind(tape, p.t2a_attention);
    v.t2a_cell = bind(tape, p.t2a_cell);
    v.pose_readout = bind(tape, p.pose_readout);
    v.action_encoder = bind(tape, p.action_encoder);
    v.a2t_attention = bind(tape, p.a2t_attention);
    v.a2t_cell = bind(tape, p.a2t_cell);
    v.embedding_readout = bind(tape, p.embedding_readout);
    return v;
}

AutoencoderOutputs autoencoder_forward(Tape& tape, std::span<const Var> e, std::span<const Var> x,
                                       Var x0, const AutoencoderVars& p, CellStateActivation act) {
    if (e.empty()) throw InputError("autoencoder_forward: empty sentence");
    if (x.empty()) throw InputError("autoencoder_forward: empty action");
    const int n = tape.value(p.t2a_cell.b_g).dim(0);
    const int n_z = tape.value(p.t2a_cell.H_s).dim(1);
    const int n_e = tape.value(p.embedding_readout.b).dim(0);

    AutoencoderOutputs out;

    // Text to action: encode the sentence, decode poses free-running
    // from the mean first pose, zero noise throughout.
    const std::vector<Var> h = encode(tape, e, p.text_encoder, act);
    const Var zero_noise = tape.leaf(Tensor({n_z}));
    DecoderState state = initial_decoder_state(tape, n);
    Var x_prev = x0;
    out.x_hat.reserve(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        const ContextVector ctx = attention_context(tape, state.g, h, p.t2a_attention);
        state = decoder_cell_step(tape, state, x_prev, ctx.c, zero_noise, p.t2a_cell, act);
        x_prev = readout(tape, state.g, p.pose_readout);
        out.x_hat.push_back(x_prev);
    }

    // Action to text: encode the real action, decode embeddings
    // free-running from a zero embedding.
    const std::vector<Var> s = encode(tape, x, p.action_encoder, act);
    DecoderState state2 = initial_decoder_state(tape, n);
    Var e_prev = tape.leaf(Tensor({n_e}));
    out.e_hat.reserve(e.size());
    for (std::size_t t = 0; t < e.size(); ++t) {
        const ContextVector ctx = attention_context(tape, state2.g, s, p.a2t_attention);
        state2 = decoder_cell_step(tape, state2, e_prev, ctx.c, zero_noise, p.a2t_cell, act);
        e_prev = readout(tape, state2.g, p.embedding_readout);
        out.e_hat.push_back(e_prev);
    }
    return out;
}

Var autoencoder_loss(Tape& tape, std::span<const Var> x, std::span<const Var> x_hat,
                     std::span<const Var> e, std::span<const Var> e_hat, double a1, double a2) {
    if (x.size() != x_hat.size()) {
        throw InputError("autoencoder_loss: action lengths differ (" + std::to_string(x.size()) +
                         " vs " + std::to_string(x_hat.size()) + ")");
    }
    if (e.size() != e_hat.size()) {
        throw InputError("autoencoder_loss: sentence lengths differ (" + std::to_string(e.size()) +
                         " vs " + std::to_string(e_hat.size()) + ")");
    }
    if (x.empty() || e.empty()) throw InputError("autoencoder_loss: empty sequences");
    auto sq_sum = [&](std::span<const Var> a, std::span<const Var> b) {
        Var total = tape.leaf(Tensor::scalar(0.0));
        for (std::size_t t = 0; t < a.size(); ++t) {
            const Var d = tape.sub(a[t], b[t]);
            total = tape.add(total, tape.dot(d, d));
        }
        return total;
    };
    const Var pose_term = tape.scale_const(sq_sum(x, x_hat), a1 / static_cast<double>(x.size()));
    const Var embed_term = tape.scale_const(sq_sum(e, e_hat), a2 / static_cast<double>(e.size()));
    return tape.add(pose_term, embed_term);
}

PretrainResult pretrain_autoencoder(std::span<const TrainingPair> dataset,
                                    const Tensor& mean_first_pose, const TrainingConfig& cfg) {
    if (dataset.empty()) throw InputError("pretrain_autoencoder: empty dataset");
    const CellStateActivation act = cfg.cell_activation();

    PretrainResult result;
    result.params = AutoencoderParams::create(cfg.n, cfg.n_e, cfg.n_x, cfg.n_z);
    result.mean_first_pose = mean_first_pose;
    Rng rng(mix_seed(cfg.seed, 0x0ae));
    init_uniform(result.params, rng, cfg.init_scale);

    AdamOptimizer adam({.lr = cfg.ae_lr});
    std::vector<Tensor*> tensors = param_tensors(result.params);

    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    const std::size_t B = static_cast<std::size_t>(cfg.batch_size);
    for (int epoch = 0; epoch < cfg.ae_epochs; ++epoch) {
        shuffle_indices(rng, order);
        double epoch_sum = 0.0;
        std::size_t epoch_batches = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += B) {
            const std::size_t end = std::min(begin + B, order.size());
            const double batch = static_cast<double>(end - begin);
            std::vector<Tensor> grads;
            grads.reserve(tensors.size());
            for (Tensor* t : tensors) grads.emplace_back(t->shape());
            double batch_loss = 0.0;
            for (std::size_t k = begin; k < end; ++k) {
                const TrainingPair& pair = dataset[order[k]];
                Tape tape;
                const AutoencoderVars vars = bind(tape, result.params);
                const Var x0 = tape.leaf(mean_first_pose);
                std::vector<Var> e_vars, x_vars;
                for (const auto& e_t : pair.embedding) e_vars.push_back(tape.leaf(e_t));
                for (const auto& x_t : pair.action) x_vars.push_back(tape.leaf(x_t));
                const AutoencoderOutputs outs =
                    autoencoder_forward(tape, e_vars, x_vars, x0, vars, act);
                const Var loss = autoencoder_loss(tape, x_vars, outs.x_hat, e_vars, outs.e_hat,
                                                  cfg.a1, cfg.a2);
                const double loss_value = tape.scalar_value(loss);
                if (!std::isfinite(loss_value)) {
                    throw NumericError("pretrain_autoencoder: non-finite loss at step " +
                                       std::to_string(result.step_loss.size()) + " (record '" +
                                       pair.id + "')");
                }
                batch_loss += loss_value / batch;
                tape.backward(loss);
                std::size_t slot = 0;
                zip_params(result.params, vars, [&](Tensor&, Var v) {
                    const Tensor& g = tape.grad(v);
                    Tensor& acc = grads[slot++];
                    for (std::size_t i = 0; i < g.numel(); ++i) acc[i] += g[i] / batch;
                });
            }
            adam.step(tensors, grads, /*ascent=*/false);
            result.step_loss.push_back(batch_loss);
            epoch_sum += batch_loss;
            ++epoch_batches;
        }
        result.epoch_loss.push_back(epoch_sum / static_cast<double>(epoch_batches));
    }
    return result;
}

namespace {

void put_dims(TensorStore& store, int n, int n_e, int n_x, int n_z) {
    store.put_scalar("meta/n", n);
    store.put_scalar("meta/n_e", n_e);
    store.put_scalar("meta/n_x", n_x);
    store.put_scalar("meta/n_z", n_z);
}

}  // namespace

void save_autoencoder_checkpoint(const std::string& path, const AutoencoderParams& params,
                                 const Tensor& mean_first_pose, const TrainingConfig& cfg) {
    TensorStore store;
    store.put_scalar("meta/format", 1.0);
    put_dims(store, params.n, params.n_e, params.n_x, params.n_z);
    store.put("meta/mean_first_pose", mean_first_pose);
    store.put_scalar("meta/config_hash", static_cast<double>(config_hash(cfg) & 0xFFFFFFFFULL));
    store_params(store, "ae/text_encoder/", params.text_encoder);
    store_params(store, "ae/t2a_attention/", params.t2a_attention);
    store_params(store, "ae/t2a_cell/", params.t2a_cell);
    store_params(store, "ae/pose_readout/", params.pose_readout);
    store_params(store, "ae/action_encoder/", params.action_encoder);
    store_params(store, "ae/a2t_attention/", params.a2t_attention);
    store_params(store, "ae/a2t_cell/", params.a2t_cell);
    store_params(store, "ae/embedding_readout/", params.embedding_readout);
    store.save(path);
}

AutoencoderCheckpoint load_autoencoder_checkpoint(const std::string& path) {
    const TensorStore store = TensorStore::load(path);
    AutoencoderCheckpoint ckpt;
    ckpt.n = static_cast<int>(store.get_scalar("meta/n"));
    ckpt.n_e = static_cast<int>(store.get_scalar("meta/n_e"));
    ckpt.n_x = static_cast<int>(store.get_scalar("meta/n_x"));
    ckpt.n_z = static_cast<int>(store.get_scalar("meta/n_z"));
    ckpt.params = AutoencoderParams::create(ckpt.n, ckpt.n_e, ckpt.n_x, ckpt.n_z);
    ckpt.mean_first_pose = store.get("meta/mean_first_pose");
    load_params(store, "ae/text_encoder/", ckpt.params.text_encoder);
    load_params(store, "ae/t2a_attention/", ckpt.params.t2a_attention);
    load_params(store, "ae/t2a_cell/", ckpt.params.t2a_cell);
    load_params(store, "ae/pose_readout/", ckpt.params.pose_readout);
    load_params(store, "ae/action_encoder/", ckpt.params.action_encoder);
    load_params(store, "ae/a2t_attention/", ckpt.params.a2t_attention);
    load_params(store, "ae/a2t_cell/", ckpt.params.a2t_cell);
    load_params(store, "ae/embedding_readout/", ckpt.params.embedding_readout);
    return ckpt;
}

}  // namespace t2m
