#pragma once

#include <stdexcept>
#include <string>

namespace multmodel {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MULTMODEL_DEFINE_ERROR(Name)    \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

MULTMODEL_DEFINE_ERROR(InvalidValue);      // out-of-domain value or unknown variable
MULTMODEL_DEFINE_ERROR(BottomProjection);  // projecting the unsatisfiable clause
MULTMODEL_DEFINE_ERROR(ScopeError);        // instance does not cover a required scope
MULTMODEL_DEFINE_ERROR(FormatError);       // semantically invalid model data
MULTMODEL_DEFINE_ERROR(NonPositiveTable);  // positive-model construction needs values > 0
MULTMODEL_DEFINE_ERROR(NotAPartition);     // decision-graph clauses must partition the domain
MULTMODEL_DEFINE_ERROR(TooManyParents);    // noisy-OR parent count above the cap
MULTMODEL_DEFINE_ERROR(DuplicateTerm);     // repeated log-linear term literals
MULTMODEL_DEFINE_ERROR(TooLarge);          // joint enumeration above the cap
MULTMODEL_DEFINE_ERROR(OrderError);        // bad explicit elimination order
MULTMODEL_DEFINE_ERROR(DegenerateZero);    // zero denominator with nonzero numerator
MULTMODEL_DEFINE_ERROR(ZeroEvidenceProbability);  // normalizing an all-zero result
MULTMODEL_DEFINE_ERROR(CapacityExceeded);  // candidate-set cap hit during elimination
MULTMODEL_DEFINE_ERROR(ValidationSkipped);  // partition check undecidable at this size

#undef MULTMODEL_DEFINE_ERROR

/// Syntax error in a model file; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace multmodel
