#pragma once

#include <stdexcept>
#include <string>

namespace drbcbf {

/// Raised when an argument has the wrong dimension or violates a precondition.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for invalid numeric parameters (non-positive Lipschitz constants, bad grids, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the backup flow integration produces a non-finite value.
class PropagationError : public std::runtime_error {
public:
    PropagationError(const std::string& what, int step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    int step() const noexcept { return step_; }

private:
    int step_;
};

/// Raised by the configuration layer; carries the offending source line when known.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace drbcbf
