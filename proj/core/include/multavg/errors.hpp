#pragma once

#include <stdexcept>
#include <string>

namespace multavg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument or configuration violates an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A value left the domain it is required to live in (e.g. |f(p^k)| > 1).
class DomainViolation : public Error {
public:
    using Error::Error;
};

/// A sieve table or sequence is too short for the requested evaluation.
class RangeError : public Error {
public:
    using Error::Error;
};

/// The requested computation exceeds a configured cost guard.
class CostGuardExceeded : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed (quadrature did not converge, an
/// internally asserted identity did not hold).
class NumericFailure : public Error {
public:
    NumericFailure(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    explicit NumericFailure(const std::string& what) : Error(what) {}

    /// Best error estimate reached before giving up, when meaningful.
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_ = 0.0;
};

} // namespace multavg
