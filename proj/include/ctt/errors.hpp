#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctt {

/// A precondition on caller-supplied values does not hold.
struct InvalidParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An integrator blew up; `step` is the offending grid index.
struct NumericInstabilityError : std::runtime_error {
    std::size_t step;
    NumericInstabilityError(const std::string& what, std::size_t step_index)
        : std::runtime_error(what + " (step " + std::to_string(step_index) + ")"),
          step(step_index) {}
};

/// An operator received an input outside its domain.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A root or target value is not bracketed by the search interval.
struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A scenario produced a degenerate search set (e.g. the boundary
/// trajectories undershoot so much that the limiting integral is <= 0).
struct DegenerateScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ctt
