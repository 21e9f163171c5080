#pragma once

#include <stdexcept>
#include <string>

namespace udw {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad inputs: parameter ranges, malformed states, malformed files.
struct ValidationError : Error {
    using Error::Error;
};

struct InvalidState : ValidationError {
    using ValidationError::ValidationError;
};

struct TooManyQubits : ValidationError {
    using ValidationError::ValidationError;
};

struct BadSubset : ValidationError {
    using ValidationError::ValidationError;
};

struct BinomialRangeError : ValidationError {
    using ValidationError::ValidationError;
};

struct CurveTooShort : ValidationError {
    using ValidationError::ValidationError;
};

// Numerical iteration failed to meet its tolerance within its cap.
struct ConvergenceError : Error {
    using Error::Error;
};

struct QuadratureNonConvergence : ConvergenceError {
    using ConvergenceError::ConvergenceError;
};

struct ModeSumNonConvergence : ConvergenceError {
    using ConvergenceError::ConvergenceError;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace udw
