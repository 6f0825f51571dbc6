// errors.hpp — exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace specdist {

/// Dimension/shape mismatch between operands.
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Operand incompatible with the represented algebra (e.g. non-diagonal
/// element passed to a diagonal-algebra triple).
struct ModeError : std::invalid_argument {
    explicit ModeError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine failed to converge or produced non-finite output.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// A constraint could not be satisfied to tolerance.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input document.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace specdist
