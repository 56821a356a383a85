#pragma once

#include <stdexcept>
#include <string>

namespace t2m {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor dimension / shape contract violations.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Bad user-facing inputs: malformed files, invalid configuration,
// violated dataset invariants, degenerate poses.
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

// Non-finite values where the numeric contract forbids them
// (e.g. NaN in a training value function).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

}  // namespace t2m
