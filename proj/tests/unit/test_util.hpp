#pragma once

#include <functional>
#include <vector>

#include "t2m/gradcheck.hpp"
#include "t2m/params_io.hpp"
#include "t2m/rng.hpp"
#include "t2m/tensor.hpp"

namespace t2m::testing {

inline Tensor random_tensor(Rng& rng, std::vector<int> shape, double lo = -0.5, double hi = 0.5) {
    Tensor t(std::move(shape));
    for (auto& v : t.values()) v = rng.uniform(lo, hi);
    return t;
}

// Checks analytical gradients of every tensor in `params` against
// central finite differences of `scalar_of_params`, which must fully
// re-evaluate the forward pass from the current params each call.
// Returns the worst relative error over all parameter tensors.
template <typename P, typename F>
double worst_gradient_error(P& params, F&& scalar_of_params,
                            const std::vector<Tensor>& analytical, double h = 1e-5) {
    std::vector<Tensor*> tensors = param_tensors(params);
    double worst = 0.0;
    for (std::size_t k = 0; k < tensors.size(); ++k) {
        const Tensor fd = finite_difference_gradient(
            [&](const Tensor& probe) {
                const Tensor saved = *tensors[k];
                *tensors[k] = probe;
                const double value = scalar_of_params(params);
                *tensors[k] = saved;
                return value;
            },
            *tensors[k], h);
        worst = std::max(worst, relative_error(analytical[k], fd));
    }
    return worst;
}

}  // namespace t2m::testing
