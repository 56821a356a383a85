#include "t2m/gradcheck.hpp"

#include <cmath>

namespace t2m {

Tensor finite_difference_gradient(const std::function<double(const Tensor&)>& f, const Tensor& x,
                                  double h) {
    Tensor grad(x.shape());
    Tensor probe = x;
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const double orig = probe[i];
        probe[i] = orig + h;
        const double fp = f(probe);
        probe[i] = orig - h;
        const double fm = f(probe);
        probe[i] = orig;
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

double relative_error(const Tensor& a, const Tensor& b, double floor) {
    require_same_shape(a, b, "relative_error");
    double num = 0.0;
    double den = floor;
    for (std::size_t i = 0; i < a.numel(); ++i) {
        num = std::max(num, std::fabs(a[i] - b[i]));
        den = std::max(den, std::fabs(b[i]));
    }
    return num / den;
}

}  // namespace t2m
