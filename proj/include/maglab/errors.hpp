#pragma once

#include <stdexcept>
#include <string>

namespace maglab {

/// Malformed input: bad indices, asymmetric matrices, duplicate points, t <= 0.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Two points at distance zero; their similarity matrix is singular.
class DuplicatePoints : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Input file could not be parsed.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The similarity matrix failed the pivoted positive-definiteness test.
class NotPositiveDefinite : public std::runtime_error {
public:
    NotPositiveDefinite(const std::string& what, double min_pivot, long index)
        : std::runtime_error(what), min_pivot_(min_pivot), index_(index) {}

    double min_pivot() const noexcept { return min_pivot_; }
    /// Row at which the factorization broke down.
    long index() const noexcept { return index_; }

private:
    double min_pivot_;
    long index_;
};

/// Exact subset enumeration was requested above the configured dimension cap.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace maglab
