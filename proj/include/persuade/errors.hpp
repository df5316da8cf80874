#pragma once

#include <stdexcept>
#include <string>

namespace persuade {

/// Base of every error raised by the library. Each subclass maps to one
/// CLI exit code (see cli.hpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, non-distribution, invalid problem.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Data cannot be rationalized, or a feasible set is empty.
class Infeasible : public Error {
public:
    using Error::Error;
};

/// A documented precondition of the requested procedure does not hold
/// (e.g. solving the experimenter's problem for an unordered experiment).
class PreconditionRefused : public Error {
public:
    using Error::Error;
};

/// A desk-scale guard was exceeded (too many messages, variables, ...).
class LimitExceeded : public Error {
public:
    using Error::Error;
};

} // namespace persuade
