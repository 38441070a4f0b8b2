#pragma once

#include <stdexcept>
#include <string>

namespace subperc {

/// Invalid argument to a sampler, graph builder or estimator.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Geometry constraint violated (box outside window, overlapping boxes, ...).
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scan bracket does not straddle the target fraction.
class BracketingError : public std::runtime_error {
public:
    BracketingError(const std::string& msg, double lo, double hi)
        : std::runtime_error(msg), fraction_lo(lo), fraction_hi(hi) {}
    double fraction_lo;
    double fraction_hi;
};

/// A stated precondition of an estimator does not hold at runtime.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& msg, double value = 0.0)
        : std::runtime_error(msg), measured(value) {}
    double measured;
};

/// Numerical integration cannot converge (e.g. non-integrable attenuation).
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad experiment configuration (parse failure, unknown key, missing key).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Filesystem failure while writing run outputs.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace subperc
