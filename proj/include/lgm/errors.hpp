#pragma once

#include <stdexcept>
#include <string>

namespace lgm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// Operand extents or dimensions do not fit together.
class ShapeError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "shape"; }
};

/// A precondition on the inputs was violated (bad group spec, slot index, ...).
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// Numerical guard tripped: the computation refused to continue rather than
/// return an unreliable answer.
class NumericalGuardError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "numerical"; }
};

class BudgetError : public NumericalGuardError {
public:
    using NumericalGuardError::NumericalGuardError;
    const char* kind() const noexcept override { return "budget"; }
};

class SpectralGapError : public NumericalGuardError {
public:
    using NumericalGuardError::NumericalGuardError;
    const char* kind() const noexcept override { return "spectral-gap"; }
};

} // namespace lgm
