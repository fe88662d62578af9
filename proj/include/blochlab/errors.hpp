#pragma once

#include <stdexcept>
#include <string>

namespace blochlab {

// Invalid arguments, malformed documents, membership violations. CLI exit 3.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Well-posed request that is intentionally not provided for the given domain
// (e.g. geodesic distance on matrix factors). CLI exit 3.
class UnsupportedError : public ValidationError {
public:
    explicit UnsupportedError(const std::string& msg) : ValidationError(msg) {}
};

// Pole, branch point, or division with |denominator| below the hard floor
// encountered during evaluation. CLI exit 4.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace blochlab
