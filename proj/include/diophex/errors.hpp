#pragma once

#include <stdexcept>
#include <string>

namespace diophex {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes or ambient dimensions do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of an operation (e.g. Plücker of {0}).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed text input.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A search would exceed its configured work budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Desk-scale guard exceeded (N > 12 and similar).
class ScaleError : public Error {
public:
    using Error::Error;
};

/// Group parameter k below the admissibility threshold of the family.
class ThresholdError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Hypotheses of a check (monotonicity, submodularity, invariance) fail.
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// Samples of a family do not share a kernel dimension.
class DegenerateSampleError : public Error {
public:
    using Error::Error;
};

/// Family or descriptor not supported.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

}  // namespace diophex
