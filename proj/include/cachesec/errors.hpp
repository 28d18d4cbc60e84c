#pragma once

#include <stdexcept>
#include <string>

namespace cachesec {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter is outside its documented domain (bad density, M > N, beta <= 2, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to reach its tolerance.
///
/// Carries the best estimate seen and the error bound attached to it so callers
/// can decide whether the partial answer is still usable.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double best_estimate, double error_bound)
        : Error(what), best_estimate_(best_estimate), error_bound_(error_bound)
    {
    }

    double best_estimate() const noexcept { return best_estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

/// Malformed or contradictory experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw ParameterError(message);
    }
}

} // namespace detail

} // namespace cachesec
