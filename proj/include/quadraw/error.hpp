// Copyright Contributors to the quadraw project.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace quadraw {

/// Base class for all quadraw errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data violates an operation precondition (bad dimensions, empty list, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Operation received a mosaic with the wrong CFA pattern.
class PatternMismatch : public Error {
public:
    using Error::Error;
};

/// Configuration parameter outside its valid range.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Lookup by name failed.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// File or stream level failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace quadraw
