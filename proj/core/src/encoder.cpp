#include "t2m/encoder.hpp"

#include "t2m/errors.hpp"

namespace t2m {

CellStateActivation cell_state_activation_from_string(const std::string& s) {
    if (s == "sigmoid") return CellStateActivation::Sigmoid;
    if (s == "tanh") return CellStateActivation::Tanh;
    throw InputError("cell_state_activation must be 'sigmoid' or 'tanh', got '" + s + "'");
}

std::string to_string(CellStateActivation a) {
    return a == CellStateActivation::Sigmoid ? "sigmoid" : "tanh";
}

namespace {
Activation act_of(CellStateActivation a) {
    return a == CellStateActivation::Sigmoid ? Activation::Sigmoid : Activation::Tanh;
}
}  // namespace

EncoderParams EncoderParams::create(int n, int in_dim) {
    EncoderParams p;
    p.n = n;
    p.in_dim = in_dim;
    p.W_o = p.W_c = p.W_f = p.W_i = Tensor({n, n});
    p.U_o = p.U_c = p.U_f = p.U_i = Tensor({n, n});
    p.W_e = Tensor({n, in_dim});
    p.b_o = p.b_c = p.b_f = p.b_i = Tensor({n});
    p.b_e = Tensor({in_dim});
    return p;
}

EncoderVars bind(Tape& tape, const EncoderParams& p) {
    EncoderVars v;
    v.W_o = tape.leaf(p.W_o); v.W_c = tape.leaf(p.W_c);
    v.W_f = tape.leaf(p.W_f); v.W_i = tape.leaf(p.W_i);
    v.U_o = tape.leaf(p.U_o); v.U_c = tape.leaf(p.U_c);
    v.U_f = tape.leaf(p.U_f); v.U_i = tape.leaf(p.U_i);
    v.W_e = tape.leaf(p.W_e);
    v.b_o = tape.leaf(p.b_o); v.b_c = tape.leaf(p.b_c);
    v.b_f = tape.leaf(p.b_f); v.b_i = tape.leaf(p.b_i);
    v.b_e = tape.leaf(p.b_e);
    return v;
}

EncoderState initial_encoder_state(Tape& tape, int n) {
    return {tape.leaf(Tensor({n})), tape.leaf(Tensor({n}))};
}

EncoderState encoder_step(Tape& tape, Var e_t, const EncoderState& prev, const EncoderVars& p,
                          CellStateActivation act) {
    const Var e_proj = tape.matmul(p.W_e, tape.add(e_t, p.b_e));
    auto gate = [&](Var W, Var U, Var b) {
        return tape.sigmoid(tape.add(tape.add(tape.matmul(W, e_proj), tape.matmul(U, prev.h)), b));
    };
    const Var o = gate(p.W_o, p.U_o, p.b_o);
    const Var f = gate(p.W_f, p.U_f, p.b_f);
    const Var i = gate(p.W_i, p.U_i, p.b_i);
    const Var candidate = tape.activation(
        tape.add(tape.add(tape.matmul(p.W_c, e_proj), tape.matmul(p.U_c, prev.h)), p.b_c),
        act_of(act));
    const Var C = tape.add(tape.mul(f, prev.C), tape.mul(i, candidate));
    const Var h = tape.mul(o, tape.activation(C, act_of(act)));
    return {h, C};
}

std::vector<Var> encode(Tape& tape, std::span<const Var> inputs, const EncoderVars& p,
                        CellStateActivation act) {
    if (inputs.empty()) throw InputError("encode: empty input sequence");
    const int n = tape.value(p.b_o).dim(0);
    EncoderState state = initial_encoder_state(tape, n);
    std::vector<Var> hidden;
    hidden.reserve(inputs.size());
    for (Var e_t : inputs) {
        state = encoder_step(tape, e_t, state, p, act);
        hidden.push_back(state.h);
    }
    return hidden;
}

AttentionParams AttentionParams::create(int n) {
    AttentionParams p;
    p.n = n;
    p.W_a = p.U_a = Tensor({n, n});
    p.v_a = p.b_a = Tensor({n});
    return p;
}

AttentionVars bind(Tape& tape, const AttentionParams& p) {
    AttentionVars v;
    v.W_a = tape.leaf(p.W_a);
    v.U_a = tape.leaf(p.U_a);
    v.v_a = tape.leaf(p.v_a);
    v.b_a = tape.leaf(p.b_a);
    return v;
}

ContextVector attention_context(Tape& tape, Var query, std::span<const Var> h,
                                const AttentionVars& p) {
    if (h.empty()) throw InputError("attention_context: empty source state list");
    const Var query_proj = tape.matmul(p.W_a, query);  // shared across i
    std::vector<Var> scores;
    scores.reserve(h.size());
    for (Var h_i : h) {
        const Var pre = tape.add(tape.add(query_proj, tape.matmul(p.U_a, h_i)), p.b_a);
        scores.push_back(tape.dot(p.v_a, tape.tanh(pre)));
    }
    const Var alpha = tape.softmax(tape.stack(scores));
    Var context = tape.scale(h[0], tape.pick(alpha, 0));
    for (std::size_t i = 1; i < h.size(); ++i) {
        context = tape.add(context, tape.scale(h[i], tape.pick(alpha, static_cast<int>(i))));
    }
    return {context, alpha};
}

void init_uniform(EncoderParams& p, Rng& rng, double scale) {
    visit_params(p, [&](const char* name, Tensor& t) {
        if (name[0] == 'b') return;  // biases stay zero
        for (auto& v : t.values()) v = rng.uniform(-scale, scale);
    });
}

void init_uniform(AttentionParams& p, Rng& rng, double scale) {
    visit_params(p, [&](const char* name, Tensor& t) {
        if (name[0] == 'b') return;
        for (auto& v : t.values()) v = rng.uniform(-scale, scale);
    });
}

}  // namespace t2m
