#pragma once

#include <stdexcept>
#include <string>

namespace synlat {

/// Raised for inputs that violate an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure exhausts its retry budget or cannot
/// produce a finite result.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace synlat
