#pragma once

#include <stdexcept>
#include <string>

namespace yuancert {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: dimensions, non-finite entries, bad files.
class InputError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not produce a verified answer within its budget.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

class NotInSpan : public Error {
public:
    explicit NotInSpan(double residual)
        : Error("matrix is not in the span of the basis pair (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class DegenerateBasis : public Error {
public:
    using Error::Error;
};

class MfcqFailed : public Error {
public:
    using Error::Error;
};

class EmptyMultiplierSet : public Error {
public:
    using Error::Error;
};

/// The multiplier polyhedron has a nontrivial recession direction.
class UnboundedDetected : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

class ConeNotCritical : public InputError {
public:
    using InputError::InputError;
};

/// An operation's structural precondition (such as set rank <= 2) does not hold.
class HypothesisViolated : public Error {
public:
    using Error::Error;
};

class DegenerateDelta : public InputError {
public:
    using InputError::InputError;
};

}  // namespace yuancert
