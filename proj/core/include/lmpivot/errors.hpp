#pragma once

#include <stdexcept>
#include <string>

namespace lmpivot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible domain (e.g. d >= 0.5, |phi| >= 1).
class ParameterDomainError : public Error {
public:
    using Error::Error;
};

/// Two inputs that must agree in length do not.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A computation produced a non-finite or otherwise unusable value.
class NumericError : public Error {
public:
    using Error::Error;
};

/// The studentizer radicand is zero or negative.
class NonpositiveStudentizer : public NumericError {
public:
    using NumericError::NumericError;
};

/// The all-ones weight vector: every centered weight vanishes.
class DegenerateWeights : public Error {
public:
    DegenerateWeights() : Error("degenerate multinomial weights (all counts equal 1)") {}
};

}  // namespace lmpivot
