#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "t2m/tensor.hpp"

namespace t2m {

// Handle to a node on a Tape. Only meaningful together with the tape
// that created it.
struct Var {
    std::uint32_t id = 0;
};

enum class Activation { Sigmoid, Tanh };

// Reverse-mode autodiff tape, define-by-run: every operation records a
// node; backward() replays adjoints in exact reverse creation order
// (creation order is topological by construction).
//
// A tape is rebuilt per training step since unrolled sequence lengths
// vary. Single-threaded per tape; independent tapes may run in
// parallel on different threads.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    // Leaf node (parameter or input constant). Gradient accumulates
    // here during backward; leaves not reachable from the loss keep a
    // zero gradient.
    Var leaf(Tensor value);

    // Elementwise; operands must have identical shapes.
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);

    // {m,k} x {k,n} -> {m,n}, or {m,k} x {k} -> {m}.
    Var matmul(Var a, Var b);

    Var activation(Var x, Activation kind);
    Var sigmoid(Var x) { return activation(x, Activation::Sigmoid); }
    Var tanh(Var x) { return activation(x, Activation::Tanh); }

    // Elementwise natural log.
    Var log(Var x);
    // Elementwise clamp to [lo, hi]; gradient passes through strictly
    // inside the interval and is zero where the clamp binds.
    Var clamp(Var x, double lo, double hi);

    // 1-D softmax with max-subtraction.
    Var softmax(Var x);

    // Reductions to scalar (shape {1}).
    Var sum(Var x);
    Var dot(Var a, Var b);

    Var scale(Var x, Var s);          // tensor times scalar variable
    Var scale_const(Var x, double c);  // tensor times constant

    // Scalars -> vector of length k.
    Var stack(std::span<const Var> scalars);
    // Element i of a vector as a scalar.
    Var pick(Var x, int i);

    // Accumulates d(loss)/d(node) for every node. loss must be a
    // scalar; throws ShapeError otherwise. May be called repeatedly on
    // the same tape (adjoints are reset each call).
    void backward(Var loss);

    const Tensor& value(Var v) const { return nodes_[v.id].value; }
    const Tensor& grad(Var v) const { return nodes_[v.id].grad; }
    double scalar_value(Var v) const { return nodes_[v.id].value[0]; }

    std::size_t size() const { return nodes_.size(); }
    void clear() { nodes_.clear(); }
    void reserve(std::size_t n) { nodes_.reserve(n); }

private:
    enum class Op : std::uint8_t {
        Leaf, Add, Sub, Mul, MatMul, MatVec, Sigmoid, Tanh, Log, Clamp,
        Softmax, Sum, Dot, Scale, ScaleConst, Stack, Pick
    };

    struct Node {
        Tensor value;
        Tensor grad;
        Op op = Op::Leaf;
        std::uint32_t a = 0;
        std::uint32_t b = 0;
        double c0 = 0.0;  // ScaleConst factor / Clamp lo / Pick index
        double c1 = 0.0;  // Clamp hi
        std::vector<std::uint32_t> parents;  // Stack only
    };

    Var push(Node n);
    void backprop_node(std::uint32_t i);

    std::vector<Node> nodes_;
};

}  // namespace t2m
