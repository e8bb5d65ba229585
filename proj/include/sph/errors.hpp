#pragma once

#include <stdexcept>
#include <string>

namespace sph {

// One exception type per failure the callers are expected to distinguish.
struct SphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SPH_ERROR(Name)                     \
  struct Name : SphError {                  \
    using SphError::SphError;               \
  }

SPH_ERROR(InvalidComplex);
SPH_ERROR(NotChainMap);
SPH_ERROR(InvalidStructure);
SPH_ERROR(DerivationConditionFailed);
SPH_ERROR(NotInvertible);
SPH_ERROR(ConnectivityViolation);
SPH_ERROR(WindowExhausted);
SPH_ERROR(WindowMismatch);
SPH_ERROR(EndpointMismatch);
SPH_ERROR(NotPerfect);
SPH_ERROR(SigmaNotStrict);
SPH_ERROR(ExtRingMismatch);
SPH_ERROR(ActionMismatch);
SPH_ERROR(Unstable);
SPH_ERROR(UnknownExample);
SPH_ERROR(ScenarioError);

#undef SPH_ERROR

}  // namespace sph
