#pragma once

#include <stdexcept>
#include <string>

namespace gie {

/// A precondition on user-supplied parameters does not hold. Maps to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The computation left the regime where its formulas are valid
/// (perturbative guard, dipole regime, resonant energy denominator).
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative numerical procedure failed to converge.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gie
