// errors.hpp: exception types raised by the simulation library.
#pragma once

#include <stdexcept>
#include <string>

namespace nhtls {

// Parameters violate a model or scenario constraint.
class ConstraintViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A closed form is undefined at these parameters (division by a vanishing
// denominator); the propagator still handles them.
class DegenerateParameters : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Base for failures of the numerical evolution itself.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TraceCollapse : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

class HermiticityDrift : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

class Overflow : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

// Operation needs data the trajectory form did not record (e.g. raw states).
class FormMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace nhtls
