#pragma once

#include <stdexcept>
#include <string>

namespace rlchoice {

// Payoff or utility outside the domain where a function is finite.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed model, lottery, or experiment configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// State space too large for a dense transition matrix.
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

// A numerical solver (stationary solve, root bracketing) failed.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public SolverError {
public:
    using SolverError::SolverError;
};

}  // namespace rlchoice
