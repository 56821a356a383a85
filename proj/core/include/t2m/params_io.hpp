#pragma once

#include <string>
#include <vector>

#include "t2m/checkpoint.hpp"
#include "t2m/tape.hpp"

namespace t2m {

template <typename P>
void store_params(TensorStore& store, const std::string& prefix, const P& params) {
    visit_params(params, [&](const char* name, const Tensor& t) { store.put(prefix + name, t); });
}

// Copies checkpoint tensors into an already-shaped params struct;
// throws ShapeError on any dimension drift, InputError on missing
// tensors.
template <typename P>
void load_params(const TensorStore& store, const std::string& prefix, P& params) {
    visit_params(params, [&](const char* name, Tensor& t) {
        const Tensor& src = store.get(prefix + name);
        require_same_shape(t, src, "checkpoint load");
        t = src;
    });
}

// Pairs each parameter tensor with its bound tape variable, in the
// shared visit order.
template <typename P, typename V, typename F>
void zip_params(P& params, const V& vars, F&& f) {
    std::vector<Tensor*> tensors;
    visit_params(params, [&](const char*, Tensor& t) { tensors.push_back(&t); });
    std::size_t i = 0;
    visit_vars(vars, [&](Var v) { f(*tensors[i++], v); });
}

// Flat list of the parameter tensors of a struct, in visit order.
template <typename P>
std::vector<Tensor*> param_tensors(P& params) {
    std::vector<Tensor*> tensors;
    visit_params(params, [&](const char*, Tensor& t) { tensors.push_back(&t); });
    return tensors;
}

}  // namespace t2m
