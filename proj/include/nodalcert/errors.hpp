#pragma once

#include <stdexcept>
#include <string>

namespace nodalcert {

// Base of every error the library throws. Callers that only need to
// distinguish "bad input / failed computation" from "not certified" catch
// this; verdicts that are sound but negative are never reported as errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NODALCERT_DEFINE_ERROR(Name)         \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

NODALCERT_DEFINE_ERROR(DivisionByZeroInterval);
NODALCERT_DEFINE_ERROR(DomainError);
NODALCERT_DEFINE_ERROR(CellOutsideDomain);
NODALCERT_DEFINE_ERROR(AdjacencyMismatch);
NODALCERT_DEFINE_ERROR(RangeViolation);
NODALCERT_DEFINE_ERROR(MissingUserLambda1);
NODALCERT_DEFINE_ERROR(PartitionInvalid);
NODALCERT_DEFINE_ERROR(QuadratureBudgetExceeded);
NODALCERT_DEFINE_ERROR(NoConvergence);
NODALCERT_DEFINE_ERROR(SingularJacobian);
NODALCERT_DEFINE_ERROR(NoRadius);
NODALCERT_DEFINE_ERROR(TauViolation);
NODALCERT_DEFINE_ERROR(ParseError);
NODALCERT_DEFINE_ERROR(ConfigError);

#undef NODALCERT_DEFINE_ERROR

}  // namespace nodalcert
