#include "t2m/gan.hpp"

#include <cmath>
#include <cstdio>

#include "t2m/errors.hpp"
#include "t2m/params_io.hpp"

namespace t2m {

GanModel GanModel::create(int n, int n_e, int n_x, int n_z) {
    GanModel m;
    m.n = n;
    m.n_e = n_e;
    m.n_x = n_x;
    m.n_z = n_z;
    m.encoder = EncoderParams::create(n, n_e);
    m.generator = GeneratorParams::create(n, n_x, n_z);
    m.discriminator = DiscriminatorParams::create(n, n_x, n_z);
    m.mean_first_pose = Tensor({n_x});
    return m;
}

GanTrainer transfer_and_freeze(const AutoencoderParams& ae, const Tensor& mean_first_pose,
                               const TrainingConfig& cfg, Rng& rng) {
    GanModel model = GanModel::create(ae.n, ae.n_e, ae.n_x, ae.n_z);
    model.encoder = ae.text_encoder;
    model.mean_first_pose = mean_first_pose;

    // Shared weights: the whole decoder cell except the noise
    // matrices, plus the pose readout. The attention over h is part of
    // the conditional machinery the autoencoder learned; G inherits it
    // too (a freshly initialized attention feeds the pretrained cell
    // context vectors it has never seen and the free-running unroll
    // diverges, losing the conditioning pretraining bought).
    model.generator.attn = ae.t2a_attention;
    model.generator.cell = ae.t2a_cell;
    model.generator.pose = ae.pose_readout;
    // The noise paths start fresh: the autoencoder ran with zero
    // noise, so its H matrices never received gradient.
    for (auto& v : model.generator.cell.H_s.values()) v = rng.uniform(-cfg.init_scale, cfg.init_scale);
    for (auto& v : model.generator.cell.H_x.values()) v = rng.uniform(-cfg.init_scale, cfg.init_scale);
    // D starts entirely fresh.
    init_uniform(model.discriminator, rng, cfg.init_scale);

    return GanTrainer(std::move(model), cfg.alpha_g, cfg.alpha_d);
}

StepMetrics gan_step(std::span<const TrainingPair> batch, GanTrainer& trainer, Rng& rng,
                     const TrainingConfig& cfg) {
    if (batch.empty()) throw InputError("gan_step: empty batch");
    const CellStateActivation act = cfg.cell_activation();
    const double B = static_cast<double>(batch.size());
    const double eps = cfg.prob_clamp;

    GanModel& model = trainer.model;
    std::vector<Tensor*> g_tensors = param_tensors(model.generator);
    std::vector<Tensor*> d_tensors = param_tensors(model.discriminator);
    std::vector<Tensor> g_grads;
    std::vector<Tensor> d_grads;
    for (Tensor* t : g_tensors) g_grads.emplace_back(t->shape());
    for (Tensor* t : d_tensors) d_grads.emplace_back(t->shape());

    StepMetrics metrics;
    metrics.step = trainer.step + 1;
    metrics.y_real.reserve(batch.size());
    metrics.y_fake.reserve(batch.size());

    for (const TrainingPair& pair : batch) {
        if (static_cast<int>(pair.action.size()) != cfg.T_o) {
            throw InputError("gan_step: record '" + pair.id + "' has " +
                             std::to_string(pair.action.size()) + " frames, config expects " +
                             std::to_string(cfg.T_o));
        }
        const std::vector<Tensor> noise = sample_noise(rng, cfg.T_o, model.n_z);

        Tape tape;
        // E participates as constants; its tensors are never updated.
        const EncoderVars enc = bind(tape, model.encoder);
        const GeneratorVars gen = bind(tape, model.generator);
        const DiscriminatorVars dis = bind(tape, model.discriminator);

        std::vector<Var> e_vars, x_vars, z_vars;
        for (const auto& e_t : pair.embedding) e_vars.push_back(tape.leaf(e_t));
        for (const auto& x_t : pair.action) x_vars.push_back(tape.leaf(x_t));
        for (const auto& z_t : noise) z_vars.push_back(tape.leaf(z_t));
        const Var x0 = tape.leaf(model.mean_first_pose);

        const std::vector<Var> h = encode(tape, e_vars, enc, act);
        const std::vector<Var> fake = generate(tape, h, z_vars, x0, gen, act);
        const Var y_fake = discriminate(tape, fake, h, dis, act);
        const Var y_real = discriminate(tape, x_vars, h, dis, act);

        const double yr = tape.scalar_value(y_real);
        const double yf = tape.scalar_value(y_fake);
        metrics.y_real.push_back(yr);
        metrics.y_fake.push_back(yf);
        if (yr <= eps || yr >= 1.0 - eps) ++metrics.clamped;
        if (yf <= eps || yf >= 1.0 - eps) ++metrics.clamped;

        const Var yr_c = tape.clamp(y_real, eps, 1.0 - eps);
        const Var yf_c = tape.clamp(y_fake, eps, 1.0 - eps);
        const Var one = tape.leaf(Tensor::scalar(1.0));
        const Var v_d = tape.add(tape.log(yr_c), tape.log(tape.sub(one, yf_c)));
        const Var v_g = tape.log(yf_c);

        metrics.value_d += tape.scalar_value(v_d) / B;
        metrics.value_g += tape.scalar_value(v_g) / B;

        // Both gradients are taken at the same parameter point; the
        // two updates are applied after the whole batch.
        tape.backward(v_d);
        std::size_t slot = 0;
        zip_params(model.discriminator, dis, [&](Tensor&, Var v) {
            const Tensor& g = tape.grad(v);
            Tensor& acc = d_grads[slot++];
            for (std::size_t i = 0; i < g.numel(); ++i) acc[i] += g[i] / B;
        });
        tape.backward(v_g);
        slot = 0;
        zip_params(model.generator, gen, [&](Tensor&, Var v) {
            const Tensor& g = tape.grad(v);
            Tensor& acc = g_grads[slot++];
            for (std::size_t i = 0; i < g.numel(); ++i) acc[i] += g[i] / B;
        });
    }

    metrics.mean_y_real = 0.0;
    metrics.mean_y_fake = 0.0;
    for (double v : metrics.y_real) metrics.mean_y_real += v / B;
    for (double v : metrics.y_fake) metrics.mean_y_fake += v / B;

    if (!std::isfinite(metrics.value_d) || !std::isfinite(metrics.value_g)) {
        std::string ids;
        for (const auto& pair : batch) ids += pair.id + " ";
        throw NumericError("gan_step: non-finite value function at step " +
                           std::to_string(metrics.step) + " (V_D=" +
                           std::to_string(metrics.value_d) + ", V_G=" +
                           std::to_string(metrics.value_g) + "; batch: " + ids + ")");
    }

    // Ascend V_D, then V_G (both gradients were computed before
    // either update).
    trainer.adam_d.step(d_tensors, d_grads, /*ascent=*/true);
    trainer.adam_g.step(g_tensors, g_grads, /*ascent=*/true);
    trainer.step = metrics.step;
    return metrics;
}

std::vector<StepMetrics> train_gan(
    std::span<const TrainingPair> data, GanTrainer& trainer, const TrainingConfig& cfg,
    const std::function<void(const GanTrainer&, const StepMetrics&)>& on_step) {
    if (data.empty()) throw InputError("train_gan: empty dataset");
    Rng rng(mix_seed(cfg.seed, 0x9a4));
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<StepMetrics> log;
    const std::size_t B = static_cast<std::size_t>(cfg.batch_size);
    std::vector<TrainingPair> batch;
    for (int epoch = 0; epoch < cfg.gan_epochs; ++epoch) {
        shuffle_indices(rng, order);
        for (std::size_t begin = 0; begin < order.size(); begin += B) {
            const std::size_t end = std::min(begin + B, order.size());
            batch.clear();
            for (std::size_t k = begin; k < end; ++k) batch.push_back(data[order[k]]);
            StepMetrics m = gan_step(batch, trainer, rng, cfg);
            if (on_step) on_step(trainer, m);
            log.push_back(std::move(m));
        }
    }
    return log;
}

std::vector<Tensor> run_generator(const GanModel& model, std::span<const Tensor> embedding,
                                  std::span<const Tensor> noise, CellStateActivation act) {
    Tape tape;
    const EncoderVars enc = bind(tape, model.encoder);
    const GeneratorVars gen = bind(tape, model.generator);
    std::vector<Var> e_vars, z_vars;
    for (const auto& e_t : embedding) e_vars.push_back(tape.leaf(e_t));
    for (const auto& z_t : noise) z_vars.push_back(tape.leaf(z_t));
    const Var x0 = tape.leaf(model.mean_first_pose);
    const std::vector<Var> h = encode(tape, e_vars, enc, act);
    const std::vector<Var> poses = generate(tape, h, z_vars, x0, gen, act);
    std::vector<Tensor> out;
    out.reserve(poses.size());
    for (Var p : poses) out.push_back(tape.value(p));
    return out;
}

double run_discriminator(const GanModel& model, std::span<const Tensor> embedding,
                         std::span<const Tensor> action, CellStateActivation act) {
    Tape tape;
    const EncoderVars enc = bind(tape, model.encoder);
    const DiscriminatorVars dis = bind(tape, model.discriminator);
    std::vector<Var> e_vars, x_vars;
    for (const auto& e_t : embedding) e_vars.push_back(tape.leaf(e_t));
    for (const auto& x_t : action) x_vars.push_back(tape.leaf(x_t));
    const std::vector<Var> h = encode(tape, e_vars, enc, act);
    return tape.scalar_value(discriminate(tape, x_vars, h, dis, act));
}

namespace {

void store_adam(TensorStore& store, const std::string& prefix, const AdamOptimizer& adam) {
    store.put_scalar(prefix + "t", static_cast<double>(adam.step_count()));
    store.put_scalar(prefix + "slots", static_cast<double>(adam.num_slots()));
    for (std::size_t i = 0; i < adam.num_slots(); ++i) {
        store.put(prefix + "m/" + std::to_string(i), adam.first_moment(i));
        store.put(prefix + "v/" + std::to_string(i), adam.second_moment(i));
    }
}

void load_adam(const TensorStore& store, const std::string& prefix, AdamOptimizer& adam) {
    const auto t = static_cast<std::int64_t>(store.get_scalar(prefix + "t"));
    const auto slots = static_cast<std::size_t>(store.get_scalar(prefix + "slots"));
    std::vector<Tensor> m, v;
    m.reserve(slots);
    v.reserve(slots);
    for (std::size_t i = 0; i < slots; ++i) {
        m.push_back(store.get(prefix + "m/" + std::to_string(i)));
        v.push_back(store.get(prefix + "v/" + std::to_string(i)));
    }
    adam.restore(std::move(m), std::move(v), t);
}

}  // namespace

void save_gan_checkpoint(const std::string& path, const GanTrainer& trainer,
                         const TrainingConfig& cfg) {
    const GanModel& model = trainer.model;
    TensorStore store;
    store.put_scalar("meta/format", 1.0);
    store.put_scalar("meta/n", model.n);
    store.put_scalar("meta/n_e", model.n_e);
    store.put_scalar("meta/n_x", model.n_x);
    store.put_scalar("meta/n_z", model.n_z);
    store.put_scalar("meta/step", static_cast<double>(trainer.step));
    store.put_scalar("meta/config_hash", static_cast<double>(config_hash(cfg) & 0xFFFFFFFFULL));
    store.put("meta/mean_first_pose", model.mean_first_pose);
    store_params(store, "E/", model.encoder);
    store_params(store, "G/attn/", model.generator.attn);
    store_params(store, "G/cell/", model.generator.cell);
    store_params(store, "G/pose/", model.generator.pose);
    store_params(store, "D/attn/", model.discriminator.attn);
    store_params(store, "D/cell/", model.discriminator.cell);
    store.put("D/W_d", model.discriminator.W_d);
    store.put("D/b_d", model.discriminator.b_d);
    store_adam(store, "adam_G/", trainer.adam_g);
    store_adam(store, "adam_D/", trainer.adam_d);
    store.save(path);
}

GanTrainer load_gan_checkpoint(const std::string& path, const TrainingConfig& cfg) {
    const TensorStore store = TensorStore::load(path);
    const int n = static_cast<int>(store.get_scalar("meta/n"));
    const int n_e = static_cast<int>(store.get_scalar("meta/n_e"));
    const int n_x = static_cast<int>(store.get_scalar("meta/n_x"));
    const int n_z = static_cast<int>(store.get_scalar("meta/n_z"));
    GanModel model = GanModel::create(n, n_e, n_x, n_z);
    model.mean_first_pose = store.get("meta/mean_first_pose");
    load_params(store, "E/", model.encoder);
    load_params(store, "G/attn/", model.generator.attn);
    load_params(store, "G/cell/", model.generator.cell);
    load_params(store, "G/pose/", model.generator.pose);
    load_params(store, "D/attn/", model.discriminator.attn);
    load_params(store, "D/cell/", model.discriminator.cell);
    model.discriminator.W_d = store.get("D/W_d");
    model.discriminator.b_d = store.get("D/b_d");
    GanTrainer trainer(std::move(model), cfg.alpha_g, cfg.alpha_d);
    trainer.step = static_cast<std::int64_t>(store.get_scalar("meta/step"));
    load_adam(store, "adam_G/", trainer.adam_g);
    load_adam(store, "adam_D/", trainer.adam_d);
    return trainer;
}

const char* const kMetricCsvHeader = "step,V_D,V_G,mean_y_real,mean_y_fake,clamped";

std::string metric_csv_row(const StepMetrics& m) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%.17g,%d",
                  static_cast<long long>(m.step), m.value_d, m.value_g, m.mean_y_real,
                  m.mean_y_fake, m.clamped);
    return buf;
}

}  // namespace t2m
