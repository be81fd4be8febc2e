#pragma once

#include <stdexcept>
#include <string>

namespace truncvine {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad command-line or configuration input.
class usage_error : public error {
public:
    using error::error;
};

/// Malformed or unusable input data (CSV contents, matrices, estimator preconditions).
class data_error : public error {
public:
    using error::error;
};

/// A structure (cherry tree, vine matrix) violates its invariants.
class structure_error : public data_error {
public:
    using data_error::data_error;
};

/// A configured resource limit would be exceeded (grid memory budget).
class resource_error : public error {
public:
    using error::error;
};

} // namespace truncvine
