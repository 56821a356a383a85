#include "t2m/tape.hpp"

#include <cmath>
#include <string>

namespace t2m {

namespace {

double stable_sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

Var Tape::push(Node n) {
    n.grad = Tensor(n.value.shape());
    nodes_.push_back(std::move(n));
    return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::leaf(Tensor value) {
    Node n;
    n.value = std::move(value);
    n.op = Op::Leaf;
    return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    require_same_shape(ta, tb, "add");
    Node n;
    n.value = ta;
    for (std::size_t i = 0; i < tb.numel(); ++i) n.value[i] += tb[i];
    n.op = Op::Add;
    n.a = a.id;
    n.b = b.id;
    return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    require_same_shape(ta, tb, "sub");
    Node n;
    n.value = ta;
    for (std::size_t i = 0; i < tb.numel(); ++i) n.value[i] -= tb[i];
    n.op = Op::Sub;
    n.a = a.id;
    n.b = b.id;
    return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    require_same_shape(ta, tb, "mul");
    Node n;
    n.value = ta;
    for (std::size_t i = 0; i < tb.numel(); ++i) n.value[i] *= tb[i];
    n.op = Op::Mul;
    n.a = a.id;
    n.b = b.id;
    return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    if (ta.ndim() != 2) {
        throw ShapeError("matmul: left operand must be a matrix, got " + shape_string(ta));
    }
    const int m = ta.dim(0);
    const int k = ta.dim(1);
    if (tb.ndim() == 1) {
        if (tb.dim(0) != k) {
            throw ShapeError("matmul: inner dimensions disagree, " + shape_string(ta) + " vs " +
                             shape_string(tb));
        }
        Node n;
        n.value = Tensor({m});
        for (int i = 0; i < m; ++i) {
            double acc = 0.0;
            for (int j = 0; j < k; ++j) acc += ta.at(i, j) * tb[static_cast<std::size_t>(j)];
            n.value[static_cast<std::size_t>(i)] = acc;
        }
        n.op = Op::MatVec;
        n.a = a.id;
        n.b = b.id;
        return push(std::move(n));
    }
    if (tb.ndim() != 2 || tb.dim(0) != k) {
        throw ShapeError("matmul: inner dimensions disagree, " + shape_string(ta) + " vs " +
                         shape_string(tb));
    }
    const int p = tb.dim(1);
    Node n;
    n.value = Tensor({m, p});
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < k; ++j) {
            const double aij = ta.at(i, j);
            if (aij == 0.0) continue;
            for (int c = 0; c < p; ++c) n.value.at(i, c) += aij * tb.at(j, c);
        }
    }
    n.op = Op::MatMul;
    n.a = a.id;
    n.b = b.id;
    return push(std::move(n));
}

Var Tape::activation(Var x, Activation kind) {
    const Tensor& tx = value(x);
    Node n;
    n.value = Tensor(tx.shape());
    if (kind == Activation::Sigmoid) {
        for (std::size_t i = 0; i < tx.numel(); ++i) n.value[i] = stable_sigmoid(tx[i]);
        n.op = Op::Sigmoid;
    } else {
        for (std::size_t i = 0; i < tx.numel(); ++i) n.value[i] = std::tanh(tx[i]);
        n.op = Op::Tanh;
    }
    n.a = x.id;
    return push(std::move(n));
}

Var Tape::log(Var x) {
    const Tensor& tx = value(x);
    Node n;
    n.value = Tensor(tx.shape());
    for (std::size_t i = 0; i < tx.numel(); ++i) n.value[i] = std::log(tx[i]);
    n.op = Op::Log;
    n.a = x.id;
    return push(std::move(n));
}

Var Tape::clamp(Var x, double lo, double hi) {
    const Tensor& tx = value(x);
    Node n;
    n.value = Tensor(tx.shape());
    for (std::size_t i = 0; i < tx.numel(); ++i) {
        n.value[i] = tx[i] < lo ? lo : (tx[i] > hi ? hi : tx[i]);
    }
    n.op = Op::Clamp;
    n.a = x.id;
    n.c0 = lo;
    n.c1 = hi;
    return push(std::move(n));
}

Var Tape::softmax(Var x) {
    const Tensor& tx = value(x);
    if (tx.ndim() != 1 || tx.numel() == 0) {
        throw ShapeError("softmax: expected non-empty vector, got " + shape_string(tx));
    }
    double mx = tx[0];
    for (std::size_t i = 1; i < tx.numel(); ++i) mx = std::max(mx, tx[i]);
    Node n;
    n.value = Tensor(tx.shape());
    double z = 0.0;
    for (std::size_t i = 0; i < tx.numel(); ++i) {
        n.value[i] = std::exp(tx[i] - mx);
        z += n.value[i];
    }
    for (std::size_t i = 0; i < tx.numel(); ++i) n.value[i] /= z;
    n.op = Op::Softmax;
    n.a = x.id;
    return push(std::move(n));
}

Var Tape::sum(Var x) {
    const Tensor& tx = value(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < tx.numel(); ++i) acc += tx[i];
    Node n;
    n.value = Tensor::scalar(acc);
    n.op = Op::Sum;
    n.a = x.id;
    return push(std::move(n));
}

Var Tape::dot(Var a, Var b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    require_same_shape(ta, tb, "dot");
    double acc = 0.0;
    for (std::size_t i = 0; i < ta.numel(); ++i) acc += ta[i] * tb[i];
    Node n;
    n.value = Tensor::scalar(acc);
    n.op = Op::Dot;
    n.a = a.id;
    n.b = b.id;
    return push(std::move(n));
}

Var Tape::scale(Var x, Var s) {
    const Tensor& tx = value(x);
    const Tensor& ts = value(s);
    if (!ts.is_scalar()) {
        throw ShapeError("scale: scale factor must be scalar, got " + shape_string(ts));
    }
    Node n;
    n.value = Tensor(tx.shape());
    for (std::size_t i = 0; i < tx.numel(); ++i) n.value[i] = tx[i] * ts[0];
    n.op = Op::Scale;
    n.a = x.id;
    n.b = s.id;
    return push(std::move(n));
}

Var Tape::scale_const(Var x, double c) {
    const Tensor& tx = value(x);
    Node n;
    n.value = Tensor(tx.shape());
    for (std::size_t i = 0; i < tx.numel(); ++i) n.value[i] = tx[i] * c;
    n.op = Op::ScaleConst;
    n.a = x.id;
    n.c0 = c;
    return push(std::move(n));
}

Var Tape::stack(std::span<const Var> scalars) {
    if (scalars.empty()) throw ShapeError("stack: empty input");
    Node n;
    n.value = Tensor({static_cast<int>(scalars.size())});
    n.parents.reserve(scalars.size());
    for (std::size_t i = 0; i < scalars.size(); ++i) {
        const Tensor& ts = value(scalars[i]);
        if (!ts.is_scalar()) {
            throw ShapeError("stack: element " + std::to_string(i) + " is not scalar, got " +
                             shape_string(ts));
        }
        n.value[i] = ts[0];
        n.parents.push_back(scalars[i].id);
    }
    n.op = Op::Stack;
    return push(std::move(n));
}

Var Tape::pick(Var x, int i) {
    const Tensor& tx = value(x);
    if (i < 0 || static_cast<std::size_t>(i) >= tx.numel()) {
        throw ShapeError("pick: index " + std::to_string(i) + " out of range for " +
                         shape_string(tx));
    }
    Node n;
    n.value = Tensor::scalar(tx[static_cast<std::size_t>(i)]);
    n.op = Op::Pick;
    n.a = x.id;
    n.c0 = static_cast<double>(i);
    return push(std::move(n));
}

void Tape::backward(Var loss) {
    if (!value(loss).is_scalar()) {
        throw ShapeError("backward: loss must be scalar, got " + shape_string(value(loss)));
    }
    for (auto& n : nodes_) n.grad.fill(0.0);
    nodes_[loss.id].grad[0] = 1.0;
    for (std::uint32_t i = loss.id + 1; i-- > 0;) {
        backprop_node(i);
    }
}

void Tape::backprop_node(std::uint32_t i) {
    Node& n = nodes_[i];
    const Tensor& g = n.grad;
    switch (n.op) {
        case Op::Leaf:
            break;
        case Op::Add: {
            Tensor& ga = nodes_[n.a].grad;
            Tensor& gb = nodes_[n.b].grad;
            for (std::size_t k = 0; k < g.numel(); ++k) {
                ga[k] += g[k];
                gb[k] += g[k];
            }
            break;
        }
        case Op::Sub: {
            Tensor& ga = nodes_[n.a].grad;
            Tensor& gb = nodes_[n.b].grad;
            for (std::size_t k = 0; k < g.numel(); ++k) {
                ga[k] += g[k];
                gb[k] -= g[k];
            }
            break;
        }
        case Op::Mul: {
            const Tensor& va = nodes_[n.a].value;
            const Tensor& vb = nodes_[n.b].value;
            Tensor& ga = nodes_[n.a].grad;
            Tensor& gb = nodes_[n.b].grad;
            for (std::size_t k = 0; k < g.numel(); ++k) {
                ga[k] += vb[k] * g[k];
                gb[k] += va[k] * g[k];
            }
            break;
        }
        case Op::MatVec: {
            const Tensor& A = nodes_[n.a].value;
            const Tensor& x = nodes_[n.b].value;
            Tensor& gA = nodes_[n.a].grad;
            Tensor& gx = nodes_[n.b].grad;
            const int m = A.dim(0);
            const int k = A.dim(1);
            for (int r = 0; r < m; ++r) {
                const double gr = g[static_cast<std::size_t>(r)];
                if (gr == 0.0) continue;
                for (int c = 0; c < k; ++c) {
                    gA.at(r, c) += gr * x[static_cast<std::size_t>(c)];
                    gx[static_cast<std::size_t>(c)] += gr * A.at(r, c);
                }
            }
            break;
        }
        case Op::MatMul: {
            const Tensor& A = nodes_[n.a].value;
            const Tensor& B = nodes_[n.b].value;
            Tensor& gA = nodes_[n.a].grad;
            Tensor& gB = nodes_[n.b].grad;
            const int m = A.dim(0);
            const int k = A.dim(1);
            const int p = B.dim(1);
            // dA = g B^T, dB = A^T g
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < p; ++c) {
                    const double grc = g.at(r, c);
                    if (grc == 0.0) continue;
                    for (int j = 0; j < k; ++j) {
                        gA.at(r, j) += grc * B.at(j, c);
                        gB.at(j, c) += grc * A.at(r, j);
                    }
                }
            }
            break;
        }
        case Op::Sigmoid: {
            Tensor& ga = nodes_[n.a].grad;
            for (std::size_t k = 0; k < g.numel(); ++k) {
                const double y = n.value[k];
                ga[k] += y * (1.0 - y) * g[k];
            }
            break;
        }
        case Op::Tanh: {
            Tensor& ga = nodes_[n.a].grad;
            for (std::size_t k = 0; k < g.numel(); ++k) {
                const double y = n.value[k];
                ga[k] += (1.0 - y * y) * g[k];
            }
            break;
        }
        case Op::Log: {
            const Tensor& va = nodes_[n.a].value;
            Tensor& ga = nodes_[n.a].grad;
            for (std::size_t k = 0; k < g.numel(); ++k) ga[k] += g[k] / va[k];
            break;
        }
        case Op::Clamp: {
            const Tensor& va = nodes_[n.a].value;
            Tensor& ga = nodes_[n.a].grad;
            for (std::size_t k = 0; k < g.numel(); ++k) {
                if (va[k] > n.c0 && va[k] < n.c1) ga[k] += g[k];
            }
            break;
        }
        case Op::Softmax: {
            Tensor& ga = nodes_[n.a].grad;
            double dotgy = 0.0;
            for (std::size_t k = 0; k < g.numel(); ++k) dotgy += g[k] * n.value[k];
            for (std::size_t k = 0; k < g.numel(); ++k) {
                ga[k] += n.value[k] * (g[k] - dotgy);
            }
            break;
        }
        case Op::Sum: {
            Tensor& ga = nodes_[n.a].grad;
            for (std::size_t k = 0; k < ga.numel(); ++k) ga[k] += g[0];
            break;
        }
        case Op::Dot: {
            const Tensor& va = nodes_[n.a].value;
            const Tensor& vb = nodes_[n.b].value;
            Tensor& ga = nodes_[n.a].grad;
            Tensor& gb = nodes_[n.b].grad;
            for (std::size_t k = 0; k < va.numel(); ++k) {
                ga[k] += vb[k] * g[0];
                gb[k] += va[k] * g[0];
            }
            break;
        }
        case Op::Scale: {
            const Tensor& vx = nodes_[n.a].value;
            const double s = nodes_[n.b].value[0];
            Tensor& gx = nodes_[n.a].grad;
            Tensor& gs = nodes_[n.b].grad;
            for (std::size_t k = 0; k < g.numel(); ++k) {
                gx[k] += s * g[k];
                gs[0] += vx[k] * g[k];
            }
            break;
        }
        case Op::ScaleConst: {
            Tensor& gx = nodes_[n.a].grad;
            for (std::size_t k = 0; k < g.numel(); ++k) gx[k] += n.c0 * g[k];
            break;
        }
        case Op::Stack: {
            for (std::size_t k = 0; k < n.parents.size(); ++k) {
                nodes_[n.parents[k]].grad[0] += g[k];
            }
            break;
        }
        case Op::Pick: {
            nodes_[n.a].grad[static_cast<std::size_t>(n.c0)] += g[0];
            break;
        }
    }
}

}  // namespace t2m
