#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "t2m/tensor.hpp"

namespace t2m {

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Adam over a fixed, ordered list of parameter tensors. Moment slots
// are allocated on the first step and keyed by position, so the same
// parameter list (same order, same shapes) must be passed every step.
class AdamOptimizer {
public:
    explicit AdamOptimizer(AdamConfig cfg) : cfg_(cfg) {}

    // One update. With ascent=false performs the usual descent step
    // (params -= lr * mhat / (sqrt(vhat) + eps)); with ascent=true the
    // signed step is added instead, for maximizing an objective.
    void step(std::span<Tensor* const> params, std::span<const Tensor> grads, bool ascent = false);

    std::int64_t step_count() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

    // Moment access for checkpointing. first()/second() are valid
    // after at least one step (or restore).
    std::size_t num_slots() const { return m_.size(); }
    const Tensor& first_moment(std::size_t i) const { return m_[i]; }
    const Tensor& second_moment(std::size_t i) const { return v_[i]; }
    void restore(std::vector<Tensor> m, std::vector<Tensor> v, std::int64_t t);

private:
    AdamConfig cfg_;
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
    std::int64_t t_ = 0;
};

}  // namespace t2m
