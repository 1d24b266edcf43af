#pragma once
// errors.hpp - exception taxonomy shared by all selfpi modules.

#include <stdexcept>
#include <string>

namespace selfpi {

struct DivisionByZero : std::domain_error {
    DivisionByZero() : std::domain_error("division by zero") {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ArgumentOutOfRange : std::domain_error {
    explicit ArgumentOutOfRange(const std::string& msg) : std::domain_error(msg) {}
};

struct InsufficientAccuracy : std::runtime_error {
    explicit InsufficientAccuracy(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidCheckpoint : std::runtime_error {
    explicit InvalidCheckpoint(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

struct SplitOutOfRange : std::domain_error {
    explicit SplitOutOfRange(const std::string& msg) : std::domain_error(msg) {}
};

// A provably-true internal invariant failed; indicates a bug, not bad input.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace selfpi
