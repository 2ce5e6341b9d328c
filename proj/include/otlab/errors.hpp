#pragma once

#include <stdexcept>
#include <string>

namespace otlab {

// Base class for every error thrown by the library. Each concrete type
// corresponds to one failure mode of the public operations, so callers
// (and tests) can catch by type.
struct OtError : std::runtime_error {
    explicit OtError(const std::string& what) : std::runtime_error(what) {}
};

#define OTLAB_ERROR_TYPE(Name)                                          \
    struct Name final : OtError {                                       \
        explicit Name(const std::string& what) : OtError(#Name ": " + what) {} \
    }

// covariance / gaussian model
OTLAB_ERROR_TYPE(BadAlpha);
OTLAB_ERROR_TYPE(DecayViolation);
OTLAB_ERROR_TYPE(GridTooLarge);
OTLAB_ERROR_TYPE(BadDimension);

// transport solver
OTLAB_ERROR_TYPE(Infeasible);
OTLAB_ERROR_TYPE(Unbounded);
OTLAB_ERROR_TYPE(NumericFailure);
OTLAB_ERROR_TYPE(TooLarge);
OTLAB_ERROR_TYPE(MissingPotential);

// selection
OTLAB_ERROR_TYPE(NonMonotoneLadder);

// interpolation / entropy
OTLAB_ERROR_TYPE(OutOfBox);
OTLAB_ERROR_TYPE(IncompatibleGrid);
OTLAB_ERROR_TYPE(EntropyUndefined);

// diagnostics
OTLAB_ERROR_TYPE(MissingValue);
OTLAB_ERROR_TYPE(InsufficientSamples);

// runner
OTLAB_ERROR_TYPE(ConfigError);
OTLAB_ERROR_TYPE(IOFailure);

#undef OTLAB_ERROR_TYPE

}  // namespace otlab
