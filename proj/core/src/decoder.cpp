#include "t2m/decoder.hpp"

#include "t2m/errors.hpp"

namespace t2m {

namespace {
Activation act_of(CellStateActivation a) {
    return a == CellStateActivation::Sigmoid ? Activation::Sigmoid : Activation::Tanh;
}
}  // namespace

DecoderCellParams DecoderCellParams::create(int n, int x_dim, int z_dim) {
    DecoderCellParams p;
    p.n = n;
    p.x_dim = x_dim;
    p.z_dim = z_dim;
    p.W_g = p.W_o = p.W_c = p.W_f = p.W_i = Tensor({n, n});
    p.U_g = p.U_o = p.U_x = p.U_c = p.U_f = p.U_i = Tensor({n, n});
    p.W_x = Tensor({n, x_dim});
    p.H_s = p.H_x = Tensor({n, z_dim});
    p.b_g = p.b_o = p.b_x = p.b_c = p.b_f = p.b_i = Tensor({n});
    return p;
}

DecoderCellVars bind(Tape& tape, const DecoderCellParams& p) {
    DecoderCellVars v;
    v.W_g = tape.leaf(p.W_g); v.W_o = tape.leaf(p.W_o); v.W_c = tape.leaf(p.W_c);
    v.W_f = tape.leaf(p.W_f); v.W_i = tape.leaf(p.W_i);
    v.U_g = tape.leaf(p.U_g); v.U_o = tape.leaf(p.U_o); v.U_x = tape.leaf(p.U_x);
    v.U_c = tape.leaf(p.U_c); v.U_f = tape.leaf(p.U_f); v.U_i = tape.leaf(p.U_i);
    v.W_x = tape.leaf(p.W_x);
    v.H_s = tape.leaf(p.H_s); v.H_x = tape.leaf(p.H_x);
    v.b_g = tape.leaf(p.b_g); v.b_o = tape.leaf(p.b_o); v.b_x = tape.leaf(p.b_x);
    v.b_c = tape.leaf(p.b_c); v.b_f = tape.leaf(p.b_f); v.b_i = tape.leaf(p.b_i);
    return v;
}

DecoderState initial_decoder_state(Tape& tape, int n) {
    return {tape.leaf(Tensor({n})), tape.leaf(Tensor({n}))};
}

DecoderState decoder_cell_step(Tape& tape, const DecoderState& prev, Var x_prev, Var c_t, Var z_t,
                               const DecoderCellVars& p, CellStateActivation act) {
    const Var x_proj = tape.add(
        tape.add(tape.add(tape.matmul(p.W_x, x_prev), tape.matmul(p.U_x, c_t)),
                 tape.matmul(p.H_x, z_t)),
        p.b_x);
    auto gate = [&](Var W, Var U, Var b) {
        return tape.sigmoid(tape.add(tape.add(tape.matmul(W, x_proj), tape.matmul(U, prev.g)), b));
    };
    const Var o = gate(p.W_o, p.U_o, p.b_o);
    const Var f = gate(p.W_f, p.U_f, p.b_f);
    const Var i = gate(p.W_i, p.U_i, p.b_i);
    const Var candidate = tape.activation(
        tape.add(tape.add(tape.matmul(p.W_c, x_proj), tape.matmul(p.U_c, prev.g)), p.b_c),
        act_of(act));
    const Var C = tape.add(tape.mul(f, prev.C), tape.mul(i, candidate));
    const Var g = tape.add(
        tape.add(tape.add(tape.matmul(p.W_g, tape.mul(o, C)), tape.matmul(p.U_g, c_t)),
                 tape.matmul(p.H_s, z_t)),
        p.b_g);
    return {g, C};
}

ReadoutParams ReadoutParams::create(int out_dim, int n) {
    ReadoutParams p;
    p.out_dim = out_dim;
    p.n = n;
    p.W = Tensor({out_dim, n});
    p.b = Tensor({out_dim});
    return p;
}

ReadoutVars bind(Tape& tape, const ReadoutParams& p) {
    return {tape.leaf(p.W), tape.leaf(p.b)};
}

Var readout(Tape& tape, Var g, const ReadoutVars& p) {
    return tape.add(tape.matmul(p.W, g), p.b);
}

GeneratorParams GeneratorParams::create(int n, int n_x, int n_z) {
    GeneratorParams p;
    p.attn = AttentionParams::create(n);
    p.cell = DecoderCellParams::create(n, n_x, n_z);
    p.pose = ReadoutParams::create(n_x, n);
    return p;
}

GeneratorVars bind(Tape& tape, const GeneratorParams& p) {
    return {bind(tape, p.attn), bind(tape, p.cell), bind(tape, p.pose)};
}

std::vector<Var> generate(Tape& tape, std::span<const Var> h, std::span<const Var> z, Var x0,
                          const GeneratorVars& p, CellStateActivation act) {
    if (h.empty()) throw InputError("generate: empty encoder state list");
    if (z.empty()) throw InputError("generate: empty noise sequence");
    const int n = tape.value(p.cell.b_g).dim(0);
    DecoderState state = initial_decoder_state(tape, n);
    Var x_prev = x0;
    std::vector<Var> poses;
    poses.reserve(z.size());
    for (Var z_t : z) {
        const ContextVector ctx = attention_context(tape, state.g, h, p.attn);
        state = decoder_cell_step(tape, state, x_prev, ctx.c, z_t, p.cell, act);
        x_prev = readout(tape, state.g, p.pose);
        poses.push_back(x_prev);
    }
    return poses;
}

DiscriminatorParams DiscriminatorParams::create(int n, int n_x, int n_z) {
    DiscriminatorParams p;
    p.attn = AttentionParams::create(n);
    p.cell = DecoderCellParams::create(n, n_x, n_z);
    p.W_d = Tensor({1, n});
    p.b_d = Tensor({1});
    return p;
}

DiscriminatorVars bind(Tape& tape, const DiscriminatorParams& p) {
    return {bind(tape, p.attn), bind(tape, p.cell), tape.leaf(p.W_d), tape.leaf(p.b_d)};
}

Var discriminate(Tape& tape, std::span<const Var> x, std::span<const Var> h,
                 const DiscriminatorVars& p, CellStateActivation act) {
    if (x.empty()) throw InputError("discriminate: empty action sequence");
    if (h.empty()) throw InputError("discriminate: empty encoder state list");
    const int n = tape.value(p.cell.b_g).dim(0);
    const int n_z = tape.value(p.cell.H_s).dim(1);
    DecoderState state = initial_decoder_state(tape, n);
    const Var zero_noise = tape.leaf(Tensor({n_z}));
    for (Var x_t : x) {
        const ContextVector ctx = attention_context(tape, state.g, h, p.attn);
        state = decoder_cell_step(tape, state, x_t, ctx.c, zero_noise, p.cell, act);
    }
    const Var logit = tape.add(tape.matmul(p.W_d, state.g), p.b_d);
    return tape.pick(tape.sigmoid(logit), 0);
}

std::vector<Tensor> sample_noise(Rng& rng, int T_o, int n_z) {
    std::vector<Tensor> z;
    z.reserve(static_cast<std::size_t>(T_o));
    for (int t = 0; t < T_o; ++t) z.push_back(sample_gaussian(rng, {n_z}));
    return z;
}

namespace {
template <typename P>
void init_uniform_impl(P& p, Rng& rng, double scale) {
    visit_params(p, [&](const char* name, Tensor& t) {
        if (name[0] == 'b') return;  // biases stay zero
        for (auto& v : t.values()) v = rng.uniform(-scale, scale);
    });
}
}  // namespace

void init_uniform(DecoderCellParams& p, Rng& rng, double scale) { init_uniform_impl(p, rng, scale); }
void init_uniform(ReadoutParams& p, Rng& rng, double scale) { init_uniform_impl(p, rng, scale); }

void init_uniform(GeneratorParams& p, Rng& rng, double scale) {
    init_uniform(p.attn, rng, scale);
    init_uniform(p.cell, rng, scale);
    init_uniform(p.pose, rng, scale);
}

void init_uniform(DiscriminatorParams& p, Rng& rng, double scale) {
    init_uniform(p.attn, rng, scale);
    init_uniform(p.cell, rng, scale);
    for (auto& v : p.W_d.values()) v = rng.uniform(-scale, scale);
    p.b_d.fill(0.0);
}

}  // namespace t2m
