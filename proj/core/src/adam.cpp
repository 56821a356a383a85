#include "t2m/adam.hpp"

#include <cmath>
#include <string>

namespace t2m {

void AdamOptimizer::step(std::span<Tensor* const> params, std::span<const Tensor> grads,
                         bool ascent) {
    if (params.size() != grads.size()) {
        throw ShapeError("adam: " + std::to_string(params.size()) + " params vs " +
                         std::to_string(grads.size()) + " grads");
    }
    if (m_.empty()) {
        m_.reserve(params.size());
        v_.reserve(params.size());
        for (const Tensor& g : grads) {
            m_.emplace_back(g.shape());
            v_.emplace_back(g.shape());
        }
    } else if (m_.size() != params.size()) {
        throw ShapeError("adam: parameter list size changed between steps");
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    const double sign = ascent ? 1.0 : -1.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        Tensor& w = *params[p];
        const Tensor& g = grads[p];
        require_same_shape(w, g, "adam");
        require_same_shape(m_[p], g, "adam moment");
        Tensor& m = m_[p];
        Tensor& v = v_[p];
        for (std::size_t i = 0; i < w.numel(); ++i) {
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            w[i] += sign * cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

void AdamOptimizer::restore(std::vector<Tensor> m, std::vector<Tensor> v, std::int64_t t) {
    if (m.size() != v.size()) throw ShapeError("adam restore: moment list sizes differ");
    m_ = std::move(m);
    v_ = std::move(v);
    t_ = t;
}

}  // namespace t2m
