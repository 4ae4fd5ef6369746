#pragma once

#include <stdexcept>
#include <string>

namespace serrinlab {

/// Base class for all domain-validation and solver failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SERRINLAB_ERROR(Name)                                        \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
    }

SERRINLAB_ERROR(NonPositiveRadius);
SERRINLAB_ERROR(NonPositiveAxis);
SERRINLAB_ERROR(UnsupportedDimension);
SERRINLAB_ERROR(ProjectionDiverged);
SERRINLAB_ERROR(CenterOutsideDomain);
SERRINLAB_ERROR(CenterLeftDomain);
SERRINLAB_ERROR(OutsideDomain);
SERRINLAB_ERROR(IllConditioned);
SERRINLAB_ERROR(NoConvergence);
SERRINLAB_ERROR(NonPositiveCurvature);
SERRINLAB_ERROR(ConditionViolated);
SERRINLAB_ERROR(InvalidDimension);
SERRINLAB_ERROR(SolverFailure);
SERRINLAB_ERROR(TooFewPoints);

#undef SERRINLAB_ERROR

} // namespace serrinlab
