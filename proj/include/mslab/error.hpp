#pragma once

#include <stdexcept>
#include <string>

namespace mslab {

// Base class for all numerical failures raised by the library. The CLI maps
// these to exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

#define MSLAB_DEFINE_ERROR(Name)                                   \
  struct Name : NumericalError {                                   \
    explicit Name(const std::string& msg) : NumericalError(msg) {} \
  }

// profiles
MSLAB_DEFINE_ERROR(NonConvergence);
MSLAB_DEFINE_ERROR(GridTooNarrow);
MSLAB_DEFINE_ERROR(GridMismatch);
MSLAB_DEFINE_ERROR(SolvabilityViolated);
MSLAB_DEFINE_ERROR(Singular);

// geometry
MSLAB_DEFINE_ERROR(OutsideChart);
MSLAB_DEFINE_ERROR(ProjectionDiverged);
MSLAB_DEFINE_ERROR(SeparationViolated);
MSLAB_DEFINE_ERROR(ChartMismatch);

// sharp limit
MSLAB_DEFINE_ERROR(DegenerateRadius);
MSLAB_DEFINE_ERROR(InterfaceCollapse);

// diffuse solver
MSLAB_DEFINE_ERROR(ResolutionTooCoarse);
MSLAB_DEFINE_ERROR(StepFailed);
MSLAB_DEFINE_ERROR(NoInterface);
MSLAB_DEFINE_ERROR(MultipleInterfaces);

// residuals
MSLAB_DEFINE_ERROR(StencilOutOfDomain);
MSLAB_DEFINE_ERROR(DegenerateFit);

// expansion
MSLAB_DEFINE_ERROR(CheckFailed);

#undef MSLAB_DEFINE_ERROR

}  // namespace mslab
