#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace macgrad {

// Shape or extent mismatch between operands.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A documented precondition was violated by the caller.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operation invoked in the wrong lifecycle state (e.g. backward before forward).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_ = 0;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Training produced a non-finite value or an unusable preconditioner.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, long step)
        : std::runtime_error(what + " at step " + std::to_string(step)), step_(step) {}

    long step() const noexcept { return step_; }

private:
    long step_;
};

}  // namespace macgrad
