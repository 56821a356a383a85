#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "t2m/errors.hpp"

namespace t2m {

// Dense row-major tensor of 64-bit floats. Value type: copy freely,
// share across threads once constructed.
//
// Rank 1 covers vectors, rank 2 matrices; a scalar is shape {1}.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<int> shape);
    Tensor(std::vector<int> shape, std::vector<double> values);

    static Tensor scalar(double v);
    static Tensor vector(std::vector<double> values);
    static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
    static Tensor full(std::vector<int> shape, double v);

    const std::vector<int>& shape() const { return shape_; }
    int ndim() const { return static_cast<int>(shape_.size()); }
    int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
    std::size_t numel() const { return values_.size(); }
    bool is_scalar() const { return values_.size() == 1; }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    // 2-D access, row-major.
    double& at(int r, int c) { return values_[static_cast<std::size_t>(r) * shape_[1] + c]; }
    double at(int r, int c) const { return values_[static_cast<std::size_t>(r) * shape_[1] + c]; }

    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
    bool all_finite() const;
    void fill(double v);

    bool operator==(const Tensor& o) const {
        return shape_ == o.shape_ && values_ == o.values_;
    }

private:
    std::vector<int> shape_;
    std::vector<double> values_;
};

std::string shape_string(const Tensor& t);
std::string shape_string(std::span<const int> shape);

// Throws ShapeError mentioning both shapes if they differ.
void require_same_shape(const Tensor& a, const Tensor& b, const char* op);

}  // namespace t2m
