#pragma once

#include <stdexcept>
#include <string>

namespace jacobi {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (t <= 0, NaN input, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Evaluation at (or within tolerance of) a pole.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

// Invalid parameter combination (e.g. c a nonpositive integer in 2F1).
class ParameterError : public DomainError {
public:
    using DomainError::DomainError;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

// A sampled function does not decay enough at the end of its grid.
class DecayError : public Error {
public:
    using Error::Error;
};

// Double quadrature would exceed the configured node budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

}  // namespace jacobi
