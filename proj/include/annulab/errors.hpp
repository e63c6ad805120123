#pragma once

#include <stdexcept>
#include <string>

namespace annulab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input outside the documented domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// A map evaluator failed; `step` is the iterate index at which it happened.
struct EvaluationError : Error {
    long step;
    EvaluationError(const std::string& msg, long step_) : Error(msg), step(step_) {}
};

struct ConstructionError : Error {
    using Error::Error;
};

struct NotPeriodicError : Error {
    using Error::Error;
};

struct IntervalUndefinedError : Error {
    using Error::Error;
};

// Trajectory left the configured escape radius; `time` is the flow time stamp.
struct EscapeError : Error {
    double time;
    EscapeError(const std::string& msg, double time_) : Error(msg), time(time_) {}
};

struct UsageError : Error {
    using Error::Error;
};

} // namespace annulab
