#pragma once

#include <stdexcept>
#include <string>

namespace epiq {

// Bad or inconsistent user-facing configuration (scenario files, CLI
// arguments, model parameters that violate documented preconditions).
// Maps to process exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// An engine declines to run a request that exceeds its representable size
// (e.g. a density matrix over too many qubits). Maps to exit code 3.
class EngineRefusal : public std::runtime_error {
public:
    explicit EngineRefusal(const std::string& msg) : std::runtime_error(msg) {}
};

// A calibration procedure produced results outside its quality contract
// (slope out of the perturbative band, non-monotone grid, negative
// stochastic-matrix diagonal). Maps to exit code 4.
class CalibrationError : public std::runtime_error {
public:
    explicit CalibrationError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace epiq
