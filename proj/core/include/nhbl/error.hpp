#pragma once

#include <stdexcept>
#include <string>

namespace nhbl {

// Rejected arguments or parameter combinations (CLI exit code 2).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The parameters put the isolated-point machinery out of its regime
// (t = 0 with gamma != 0 yields exceptional rings, not points).
class RingRegime : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// A numerical procedure failed to converge or hit a singular point
// (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A winding loop passed through (or too close to) a band-touching point.
class LoopThroughDefect : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace nhbl
