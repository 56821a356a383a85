#pragma once

#include <optional>
#include <string>
#include <vector>

#include "t2m/tensor.hpp"

namespace t2m {

// Named-tensor container: the checkpoint format shared by every
// module. Binary layout, all integers and floats little-endian:
//
//   magic   8 bytes  "NTENSOR\0"
//   version u32      1
//   count   u64
//   entry*  u32 name_len | name bytes | u32 ndim | u32 dims[ndim]
//           | f64 values[prod(dims)]
//
// Entry order is preserved; save(load(f)) is byte-identical.
class TensorStore {
public:
    void put(const std::string& name, Tensor t);
    bool contains(const std::string& name) const;
    const Tensor& get(const std::string& name) const;  // throws InputError if absent
    std::optional<Tensor> find(const std::string& name) const;

    double get_scalar(const std::string& name) const;
    void put_scalar(const std::string& name, double v) { put(name, Tensor::scalar(v)); }

    const std::vector<std::string>& names() const { return order_; }
    std::size_t size() const { return order_.size(); }

    void save(const std::string& path) const;
    static TensorStore load(const std::string& path);

private:
    std::vector<std::string> order_;
    std::vector<Tensor> tensors_;
};

}  // namespace t2m
