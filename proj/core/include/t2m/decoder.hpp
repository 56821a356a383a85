#pragma once

#include <span>
#include <type_traits>
#include <vector>

#include "t2m/encoder.hpp"
#include "t2m/rng.hpp"
#include "t2m/tape.hpp"

namespace t2m {

// Attention-decoder cell. x_dim is the dimension of the fed-back
// output (n_x for pose decoding, n_e for the embedding-reconstruction
// decoder); z_dim is the noise dimension (the noise input is the zero
// vector wherever the cell is used deterministically).
struct DecoderCellParams {
    int n = 0;
    int x_dim = 0;
    int z_dim = 0;
    Tensor W_g, W_o, W_c, W_f, W_i;       // {n, n}
    Tensor U_g, U_o, U_x, U_c, U_f, U_i;  // {n, n}
    Tensor W_x;                           // {n, x_dim}, projects x_{t-1}
    Tensor H_s, H_x;                      // {n, z_dim}, noise paths
    Tensor b_g, b_o, b_x, b_c, b_f, b_i;  // {n}

    static DecoderCellParams create(int n, int x_dim, int z_dim);
};

template <typename P, typename F>
    requires std::is_same_v<std::remove_const_t<P>, DecoderCellParams>
void visit_params(P& p, F&& f) {
    f("W_g", p.W_g); f("W_o", p.W_o); f("W_c", p.W_c); f("W_f", p.W_f); f("W_i", p.W_i);
    f("U_g", p.U_g); f("U_o", p.U_o); f("U_x", p.U_x); f("U_c", p.U_c);
    f("U_f", p.U_f); f("U_i", p.U_i);
    f("W_x", p.W_x);
    f("H_s", p.H_s); f("H_x", p.H_x);
    f("b_g", p.b_g); f("b_o", p.b_o); f("b_x", p.b_x); f("b_c", p.b_c);
    f("b_f", p.b_f); f("b_i", p.b_i);
}

struct DecoderCellVars {
    Var W_g, W_o, W_c, W_f, W_i;
    Var U_g, U_o, U_x, U_c, U_f, U_i;
    Var W_x;
    Var H_s, H_x;
    Var b_g, b_o, b_x, b_c, b_f, b_i;
};

template <typename F>
void visit_vars(const DecoderCellVars& v, F&& f) {
    f(v.W_g); f(v.W_o); f(v.W_c); f(v.W_f); f(v.W_i);
    f(v.U_g); f(v.U_o); f(v.U_x); f(v.U_c); f(v.U_f); f(v.U_i);
    f(v.W_x);
    f(v.H_s); f(v.H_x);
    f(v.b_g); f(v.b_o); f(v.b_x); f(v.b_c); f(v.b_f); f(v.b_i);
}

DecoderCellVars bind(Tape& tape, const DecoderCellParams& p);

struct DecoderState {
    Var g;  // hidden, {n}
    Var C;  // cell, {n}
};

DecoderState initial_decoder_state(Tape& tape, int n);

// One step, exactly as the cell equations compose:
//   x'_t = W_x x_prev + U_x c_t + H_x z_t + b_x
//   o, f, i = sigmoid gates of (W x'_t + U g_prev + b)
//   C_t = f o C_prev + i o act(W_c x'_t + U_c g_prev + b_c)
//   g_t = W_g (o o C_t) + U_g c_t + H_s z_t + b_g
// The hidden state g_t is an affine readout of the gated cell with no
// outer nonlinearity.
DecoderState decoder_cell_step(Tape& tape, const DecoderState& prev, Var x_prev, Var c_t, Var z_t,
                               const DecoderCellVars& p,
                               CellStateActivation act = CellStateActivation::Sigmoid);

// Affine readout out = W g + b; used for the pose output (out_dim =
// n_x) and the embedding reconstruction (out_dim = n_e).
struct ReadoutParams {
    int out_dim = 0;
    int n = 0;
    Tensor W;  // {out_dim, n}
    Tensor b;  // {out_dim}

    static ReadoutParams create(int out_dim, int n);
};

template <typename P, typename F>
    requires std::is_same_v<std::remove_const_t<P>, ReadoutParams>
void visit_params(P& p, F&& f) {
    f("W", p.W);
    f("b", p.b);
}

struct ReadoutVars {
    Var W, b;
};

template <typename F>
void visit_vars(const ReadoutVars& v, F&& f) {
    f(v.W);
    f(v.b);
}

ReadoutVars bind(Tape& tape, const ReadoutParams& p);

Var readout(Tape& tape, Var g, const ReadoutVars& p);

// Generator: attention over the encoder states plus the decoder cell,
// free-running from the mean first pose.
struct GeneratorParams {
    AttentionParams attn;
    DecoderCellParams cell;
    ReadoutParams pose;

    static GeneratorParams create(int n, int n_x, int n_z);
};

template <typename P, typename F>
    requires std::is_same_v<std::remove_const_t<P>, GeneratorParams>
void visit_params(P& p, F&& f) {
    visit_params(p.attn, f);
    visit_params(p.cell, f);
    visit_params(p.pose, f);
}

struct GeneratorVars {
    AttentionVars attn;
    DecoderCellVars cell;
    ReadoutVars pose;
};

template <typename F>
void visit_vars(const GeneratorVars& v, F&& f) {
    visit_vars(v.attn, f);
    visit_vars(v.cell, f);
    visit_vars(v.pose, f);
}

GeneratorVars bind(Tape& tape, const GeneratorParams& p);

// x_t for t = 1..T_o, with c_t attended using query g_{t-1}, the cell
// fed the previously generated pose, and z_t the per-step noise.
std::vector<Var> generate(Tape& tape, std::span<const Var> h, std::span<const Var> z, Var x0,
                          const GeneratorVars& p,
                          CellStateActivation act = CellStateActivation::Sigmoid);

// Discriminator: same cell run with zero noise, consuming the
// examined pose x_t at step t; scalar head on the last hidden state.
struct DiscriminatorParams {
    AttentionParams attn;
    DecoderCellParams cell;
    Tensor W_d;  // {1, n}
    Tensor b_d;  // {1}

    static DiscriminatorParams create(int n, int n_x, int n_z);
};

template <typename P, typename F>
    requires std::is_same_v<std::remove_const_t<P>, DiscriminatorParams>
void visit_params(P& p, F&& f) {
    visit_params(p.attn, f);
    visit_params(p.cell, f);
    f("W_d", p.W_d);
    f("b_d", p.b_d);
}

struct DiscriminatorVars {
    AttentionVars attn;
    DecoderCellVars cell;
    Var W_d, b_d;
};

template <typename F>
void visit_vars(const DiscriminatorVars& v, F&& f) {
    visit_vars(v.attn, f);
    visit_vars(v.cell, f);
    f(v.W_d);
    f(v.b_d);
}

DiscriminatorVars bind(Tape& tape, const DiscriminatorParams& p);

// sigmoid(W_d d_To + b_d) in (0, 1), as a scalar Var.
Var discriminate(Tape& tape, std::span<const Var> x, std::span<const Var> h,
                 const DiscriminatorVars& p,
                 CellStateActivation act = CellStateActivation::Sigmoid);

// T_o i.i.d. N(0,1) noise vectors of dimension n_z.
std::vector<Tensor> sample_noise(Rng& rng, int T_o, int n_z);

void init_uniform(DecoderCellParams& p, Rng& rng, double scale);
void init_uniform(ReadoutParams& p, Rng& rng, double scale);
void init_uniform(GeneratorParams& p, Rng& rng, double scale);
void init_uniform(DiscriminatorParams& p, Rng& rng, double scale);

}  // namespace t2m
