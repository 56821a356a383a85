#pragma once

#include <functional>

#include "t2m/tensor.hpp"

namespace t2m {

// Central-difference gradient of a scalar function, coordinate by
// coordinate: (f(x + h e_i) - f(x - h e_i)) / (2h). Independent of the
// tape machinery; serves as the oracle for gradient checks.
Tensor finite_difference_gradient(const std::function<double(const Tensor&)>& f, const Tensor& x,
                                  double h = 1e-5);

// max_i |a_i - b_i| / max(floor, max_i |b_i|) with b the reference.
double relative_error(const Tensor& a, const Tensor& b, double floor = 1e-6);

}  // namespace t2m
