// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXREC_ERRORS_HPP
#define MAXREC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace maxrec {

// Base of everything this library throws. The CLI maps each category to a
// distinct exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An argument outside its mathematical domain (t outside [0,T], |x| > 1, ...).
struct DomainError : Error {
    using Error::Error;
};

// Inconsistent or invalid configuration (undersized quadrature, CFL
// violation, unregistered operator, bad config key).
struct ConfigError : Error {
    using Error::Error;
};

// Array shapes that do not line up (sample counts, grid mismatches).
struct ShapeError : Error {
    using Error::Error;
};

// Non-positive coefficient fields.
struct MediumError : Error {
    using Error::Error;
};

// Non-finite values produced by time stepping.
struct InstabilityError : Error {
    using Error::Error;
};

// File-format problems, each with its own subtype so callers can tell a
// corrupt header from a short read.
struct IoError : Error {
    using Error::Error;
};
struct BadMagicError : IoError {
    using IoError::IoError;
};
struct TruncatedPayloadError : IoError {
    using IoError::IoError;
};
struct SizeMismatchError : IoError {
    using IoError::IoError;
};

} // namespace maxrec

#endif
