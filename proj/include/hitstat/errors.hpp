#pragma once

#include <stdexcept>
#include <string>

namespace hitstat {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HITSTAT_DEFINE_ERROR(NAME)          \
  class NAME : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

// Chain validation
HITSTAT_DEFINE_ERROR(RowSumError);
HITSTAT_DEFINE_ERROR(NegativeEntry);
HITSTAT_DEFINE_ERROR(BadIndex);
HITSTAT_DEFINE_ERROR(DuplicateLabel);

// Stationary / mixing analysis
HITSTAT_DEFINE_ERROR(NotUnique);
HITSTAT_DEFINE_ERROR(HorizonTooSmall);

// Hitting / sampling
HITSTAT_DEFINE_ERROR(Unreachable);
HITSTAT_DEFINE_ERROR(CapExceeded);

// Spectral
HITSTAT_DEFINE_ERROR(NotReversible);
HITSTAT_DEFINE_ERROR(NotIrreducible);
HITSTAT_DEFINE_ERROR(StateInU);

// Builders
HITSTAT_DEFINE_ERROR(BadParams);
HITSTAT_DEFINE_ERROR(BadHorizon);
HITSTAT_DEFINE_ERROR(BadWeights);
HITSTAT_DEFINE_ERROR(Disconnected);
HITSTAT_DEFINE_ERROR(SelfLoopError);

// Harness
HITSTAT_DEFINE_ERROR(NotApplicable);
HITSTAT_DEFINE_ERROR(PreconditionFailed);
HITSTAT_DEFINE_ERROR(Uncertifiable);

#undef HITSTAT_DEFINE_ERROR

}  // namespace hitstat
