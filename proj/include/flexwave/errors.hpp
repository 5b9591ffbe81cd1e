#pragma once

#include <stdexcept>
#include <string>

namespace flexwave {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    /// Short machine-readable tag, e.g. "NonpositiveRadicand".
    virtual const char* kind() const noexcept { return "Error"; }
};

#define FLEXWAVE_DEFINE_ERROR(Name)                                      \
    class Name : public Error {                                          \
    public:                                                              \
        explicit Name(const std::string& what) : Error(what) {}          \
        const char* kind() const noexcept override { return #Name; }     \
    }

FLEXWAVE_DEFINE_ERROR(DomainError);
FLEXWAVE_DEFINE_ERROR(AliasingError);
FLEXWAVE_DEFINE_ERROR(NonpositiveRadicand);
FLEXWAVE_DEFINE_ERROR(WiltonPole);
FLEXWAVE_DEFINE_ERROR(FiniteDepthUnsupported);
FLEXWAVE_DEFINE_ERROR(NoPositiveRoot);
FLEXWAVE_DEFINE_ERROR(NoConvergence);
FLEXWAVE_DEFINE_ERROR(SingularJacobian);
FLEXWAVE_DEFINE_ERROR(StepUnderflow);
FLEXWAVE_DEFINE_ERROR(InsufficientPoints);
FLEXWAVE_DEFINE_ERROR(EigSolverFailure);
FLEXWAVE_DEFINE_ERROR(ConfigError);
FLEXWAVE_DEFINE_ERROR(FormatError);

#undef FLEXWAVE_DEFINE_ERROR

}  // namespace flexwave
