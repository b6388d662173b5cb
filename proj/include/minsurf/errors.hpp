#pragma once

#include <stdexcept>
#include <string>

namespace minsurf {

/// Base of every error raised by the library. `kind()` names the failure
/// class and is what the CLI and the Python bindings report.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

#define MINSURF_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                        \
   public:                                                           \
    using Error::Error;                                              \
    const char* kind() const noexcept override { return #Name; }     \
  };

MINSURF_DEFINE_ERROR(InvalidInput)
MINSURF_DEFINE_ERROR(DegenerateMetric)
MINSURF_DEFINE_ERROR(StepTooLarge)
MINSURF_DEFINE_ERROR(NotMinimal)
MINSURF_DEFINE_ERROR(UnknownPreset)
MINSURF_DEFINE_ERROR(PathOutsideDomain)
MINSURF_DEFINE_ERROR(SingularityOnPath)
MINSURF_DEFINE_ERROR(NoConvergence)
MINSURF_DEFINE_ERROR(StabilityViolation)
MINSURF_DEFINE_ERROR(BlowUp)
MINSURF_DEFINE_ERROR(PastExtinction)
MINSURF_DEFINE_ERROR(InsufficientDomain)
MINSURF_DEFINE_ERROR(NotSubharmonic)
MINSURF_DEFINE_ERROR(BadSector)
MINSURF_DEFINE_ERROR(GridMisaligned)
MINSURF_DEFINE_ERROR(SignChange)
MINSURF_DEFINE_ERROR(SectorTooSmall)
MINSURF_DEFINE_ERROR(NonFiniteSamples)
MINSURF_DEFINE_ERROR(OutOfRange)
MINSURF_DEFINE_ERROR(WindowOutOfRange)
MINSURF_DEFINE_ERROR(HypothesisViolated)
MINSURF_DEFINE_ERROR(NegativeEigenvalue)
MINSURF_DEFINE_ERROR(ZeroField)
MINSURF_DEFINE_ERROR(BruteForceTooLarge)
MINSURF_DEFINE_ERROR(UsageError)
MINSURF_DEFINE_ERROR(IoError)

#undef MINSURF_DEFINE_ERROR

}  // namespace minsurf
