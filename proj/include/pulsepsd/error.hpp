#pragma once

#include <stdexcept>
#include <string>

namespace pulsepsd {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter or precondition was violated; the message names the invariant.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

// A closed form could not be evaluated at the requested frequency.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, double omega) : Error(what), omega_(omega) {}
    double omega() const noexcept { return omega_; }

private:
    double omega_;
};

// Peak or lobe detection failed for the given spectrum.
class DetectionFailure : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace pulsepsd
