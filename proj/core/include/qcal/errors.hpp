#pragma once

#include <stdexcept>
#include <string>

namespace qcal {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad values fed to an operation (non-finite parameter, negative count, ...).
struct InvalidParameterError : Error {
    using Error::Error;
};

// A configuration that violates a documented precondition or schema
// (step-size guards, unknown config keys, detector regime limits).
// The CLI maps this family to exit code 2.
struct ConfigurationError : Error {
    using Error::Error;
};

// Overflow/underflow or non-finite intermediate despite valid inputs.
struct NumericalRangeError : Error {
    using Error::Error;
};

// A fit that cannot produce a meaningful answer (non-decaying series, ...).
// The CLI maps runtime failures like this to exit code 3.
struct FitFailureError : Error {
    using Error::Error;
};

}  // namespace qcal
