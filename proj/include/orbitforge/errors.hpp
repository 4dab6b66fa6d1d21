#pragma once

#include <stdexcept>
#include <string>

namespace orbitforge {

// Error taxonomy. The CLI maps these onto its exit-code contract:
//   1 usage/config, 2 verification failure, 3 search exhaustion,
//   4 precision exhaustion.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& what)
        : Error("precision exhausted: " + what) {}
};

struct DivisionByEnclosedZero : Error {
    explicit DivisionByEnclosedZero(const std::string& what)
        : Error("division by enclosed zero: " + what) {}
};

// A boundary arc enclosure could not be separated from a target value.
struct BoundaryZero : Error {
    explicit BoundaryZero(const std::string& what)
        : Error("boundary contact: " + what) {}
};
using BoundaryContact = BoundaryZero;

struct SearchExhausted : Error {
    explicit SearchExhausted(const std::string& what)
        : Error("search exhausted: " + what) {}
};

struct RetryExhausted : Error {
    explicit RetryExhausted(const std::string& what)
        : Error("retry budget exhausted: " + what) {}
};

struct NonSimpleZero : Error {
    explicit NonSimpleZero(const std::string& what)
        : Error("non-simple zero: " + what) {}
};

struct QuadratureFailure : Error {
    explicit QuadratureFailure(const std::string& what)
        : Error("quadrature failure: " + what) {}
};

struct InvalidSchedule : Error {
    explicit InvalidSchedule(const std::string& what)
        : Error("invalid schedule: " + what) {}
};

struct DegenerateArgument : Error {
    explicit DegenerateArgument(const std::string& what)
        : Error("degenerate argument: " + what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what)
        : Error("config error: " + what) {}
};

struct StateError : Error {
    explicit StateError(const std::string& what)
        : Error("state file error: " + what) {}
};

// More micro-steps requested than the stage budget admits.
struct ScheduleBug : Error {
    explicit ScheduleBug(const std::string& what)
        : Error("schedule bug: " + what) {}
};

} // namespace orbitforge
