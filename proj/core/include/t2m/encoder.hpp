#pragma once

#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "t2m/rng.hpp"
#include "t2m/tape.hpp"
#include "t2m/tensor.hpp"

namespace t2m {

// Which nonlinearity wraps the cell state (and the cell-state
// candidate). The printed equations use the sigmoid where standard
// LSTMs use tanh; both are supported, sigmoid is the default.
enum class CellStateActivation { Sigmoid, Tanh };

CellStateActivation cell_state_activation_from_string(const std::string& s);
std::string to_string(CellStateActivation a);

// Recurrent encoder cell parameters. in_dim is n_e for the text
// encoder and n_x for the action-to-text encoder of the autoencoder.
struct EncoderParams {
    int n = 0;
    int in_dim = 0;
    Tensor W_o, W_c, W_f, W_i;  // {n, n}
    Tensor U_o, U_c, U_f, U_i;  // {n, n}
    Tensor W_e;                 // {n, in_dim}
    Tensor b_o, b_c, b_f, b_i;  // {n}
    Tensor b_e;                 // {in_dim}

    static EncoderParams create(int n, int in_dim);
};

// Enumerates (name, tensor) pairs in a fixed order shared by bind()
// and visit_vars(); checkpoint layout and optimizer slot order both
// depend on it.
template <typename P, typename F>
    requires std::is_same_v<std::remove_const_t<P>, EncoderParams>
void visit_params(P& p, F&& f) {
    f("W_o", p.W_o); f("W_c", p.W_c); f("W_f", p.W_f); f("W_i", p.W_i);
    f("U_o", p.U_o); f("U_c", p.U_c); f("U_f", p.U_f); f("U_i", p.U_i);
    f("W_e", p.W_e);
    f("b_o", p.b_o); f("b_c", p.b_c); f("b_f", p.b_f); f("b_i", p.b_i);
    f("b_e", p.b_e);
}

struct EncoderVars {
    Var W_o, W_c, W_f, W_i;
    Var U_o, U_c, U_f, U_i;
    Var W_e;
    Var b_o, b_c, b_f, b_i;
    Var b_e;
};

template <typename F>
void visit_vars(const EncoderVars& v, F&& f) {
    f(v.W_o); f(v.W_c); f(v.W_f); f(v.W_i);
    f(v.U_o); f(v.U_c); f(v.U_f); f(v.U_i);
    f(v.W_e);
    f(v.b_o); f(v.b_c); f(v.b_f); f(v.b_i);
    f(v.b_e);
}

EncoderVars bind(Tape& tape, const EncoderParams& p);

struct EncoderState {
    Var h;  // hidden, {n}
    Var C;  // cell, {n}
};

// Zero-initialized (h0, C0).
EncoderState initial_encoder_state(Tape& tape, int n);

// One recurrence step:
//   e'_t = W_e (e_t + b_e)
//   o, f, i = sigmoid gates of (W e'_t + U h_prev + b)
//   C_t = f o C_prev + i o act(W_c e'_t + U_c h_prev + b_c)
//   h_t = o o act(C_t)
// act is the configured cell-state activation.
EncoderState encoder_step(Tape& tape, Var e_t, const EncoderState& prev, const EncoderVars& p,
                          CellStateActivation act = CellStateActivation::Sigmoid);

// Unrolls encoder_step from the zero state; returns h_1..h_Ti.
// Throws InputError on an empty input sequence.
std::vector<Var> encode(Tape& tape, std::span<const Var> inputs, const EncoderVars& p,
                        CellStateActivation act = CellStateActivation::Sigmoid);

// Additive attention scoring parameters.
struct AttentionParams {
    int n = 0;
    Tensor W_a, U_a;  // {n, n}
    Tensor v_a, b_a;  // {n}

    static AttentionParams create(int n);
};

template <typename P, typename F>
    requires std::is_same_v<std::remove_const_t<P>, AttentionParams>
void visit_params(P& p, F&& f) {
    f("W_a", p.W_a); f("U_a", p.U_a); f("v_a", p.v_a); f("b_a", p.b_a);
}

struct AttentionVars {
    Var W_a, U_a, v_a, b_a;
};

template <typename F>
void visit_vars(const AttentionVars& v, F&& f) {
    f(v.W_a); f(v.U_a); f(v.v_a); f(v.b_a);
}

AttentionVars bind(Tape& tape, const AttentionParams& p);

struct ContextVector {
    Var c;      // {n}, convex combination of the source states
    Var alpha;  // {T_i}, attention weights, sums to 1
};

// score_i = v_a . tanh(W_a query + U_a h_i + b_a); alpha = softmax of
// the scores over i; c = sum_i alpha_i h_i.
ContextVector attention_context(Tape& tape, Var query, std::span<const Var> h,
                                const AttentionVars& p);

// Uniform(-scale, scale) for matrices, zeros for bias vectors.
void init_uniform(EncoderParams& p, Rng& rng, double scale);
void init_uniform(AttentionParams& p, Rng& rng, double scale);

}  // namespace t2m
