#pragma once

#include <stdexcept>
#include <string>

namespace liqa {

/// Base class for runtime failures raised by the library. Precondition
/// violations on arguments are reported with std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An image file could not be read or decoded.
class DecodeError : public Error {
public:
    using Error::Error;
};

/// A manifest, table or config document is malformed.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A metric is not strictly monotone over a blur grid, so it cannot be
/// converted onto the blur axis.
class MonotonicityError : public Error {
public:
    using Error::Error;
};

/// Not enough spectral or sample support to produce an estimate.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

}  // namespace liqa
