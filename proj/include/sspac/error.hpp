#pragma once

#include <stdexcept>
#include <string>

namespace sspac {

/// Malformed input: bad arguments, inconsistent shapes, invalid files.
/// The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A well-formed request that the algorithm could not complete.
/// The CLI maps these to exit code 1.
class AlgorithmError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgs : public InputError {
public:
    using InputError::InputError;
};

class ShapeMismatch : public InputError {
public:
    using InputError::InputError;
};

class InvalidDelta : public InputError {
public:
    using InputError::InputError;
};

class MinCostZero : public InputError {
public:
    using InputError::InputError;
};

class TooLarge : public InputError {
public:
    using InputError::InputError;
};

class NonConvergence : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class ImproperPolicy : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class Infeasible : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class DoublingCapExceeded : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

class NoFeasiblePolicy : public AlgorithmError {
public:
    using AlgorithmError::AlgorithmError;
};

} // namespace sspac
