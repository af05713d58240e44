#pragma once

#include <stdexcept>
#include <string>

namespace sinebeta {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define SINEBETA_ERROR(Name)                                   \
    class Name : public Error {                                \
    public:                                                    \
        explicit Name(const std::string& what) : Error(what) {} \
    }

// Quadrature or evaluation produced a non-finite value or did not converge.
SINEBETA_ERROR(NonFinite);
SINEBETA_ERROR(SupportExceedsWindow);
SINEBETA_ERROR(OutOfWindow);
SINEBETA_ERROR(EndpointSingularity);
SINEBETA_ERROR(ScaleSeparationViolated);
SINEBETA_ERROR(CoincidentPoints);
SINEBETA_ERROR(RootNotBracketed);
SINEBETA_ERROR(TruncationExceedsWindow);
SINEBETA_ERROR(InsufficientBulk);
SINEBETA_ERROR(InvalidArgument);

#undef SINEBETA_ERROR

}  // namespace sinebeta
