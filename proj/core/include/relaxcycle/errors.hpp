#ifndef RELAXCYCLE_ERRORS_HPP
#define RELAXCYCLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace relaxcycle {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Rejected input: invalid parameters, malformed files, inconsistent options.
// The CLI maps these to exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

// State outside the model's domain (s <= 0, e <= 0, n < 0). A subtype of
// ValidationError because such states are rejected, never clamped.
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// File or stream failure, annotated with the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

// A computation started from valid inputs but could not produce a result:
// non-convergence, step underflow, ambiguous scans. Carries a short
// machine-readable code so batch drivers can report failures as status
// fields instead of aborting. The CLI maps these to exit code 2.
class NumericalError : public Error {
public:
    NumericalError(std::string code, const std::string& what)
        : Error(what), code_(std::move(code)) {}
    explicit NumericalError(const std::string& what)
        : Error(what), code_("numerical") {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

} // namespace relaxcycle

#endif
