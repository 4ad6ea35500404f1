#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace starry {

/// Argument outside an operation's documented domain.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A sampled path violates the excursion invariants (nonnegative, zero at both ends).
class InvalidExcursion : public std::runtime_error {
public:
    InvalidExcursion(const std::string& what, std::size_t index)
        : std::runtime_error(what + " (index " + std::to_string(index) + ")"), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// A window has too few grid cells to resolve the zig-zag it is matched against.
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Indices needed by a map-metric query are not part of its chain-point subset.
class SubsetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A quasisymmetry gauge that is not positive and nondecreasing where queried.
class InvalidProfile : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input file.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace starry
