#pragma once

#include <stdexcept>
#include <string>

namespace rfnn {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape/size mismatch; the message names the offending dimension.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Least-squares failure (rank deficiency, non-finite inputs, divergence).
class SolveError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value; the message names the field.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace rfnn
