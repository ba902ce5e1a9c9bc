#pragma once

#include <stdexcept>
#include <string>

namespace gew {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define GEW_ERROR(Name)                                                   \
    class Name : public Error {                                           \
    public:                                                               \
        using Error::Error;                                               \
        const char* kind() const noexcept override { return #Name; }      \
    };

GEW_ERROR(ConfigError)
GEW_ERROR(SingularFrame)
GEW_ERROR(IllConditionedFit)
GEW_ERROR(GridTooCoarse)
GEW_ERROR(DomainError)
GEW_ERROR(QuadratureFailure)
GEW_ERROR(OverflowGuard)
GEW_ERROR(IndexError)
GEW_ERROR(DimensionMismatch)
GEW_ERROR(SizeCap)
GEW_ERROR(NonConvergence)
GEW_ERROR(SingularMatrix)
GEW_ERROR(GridMismatch)
GEW_ERROR(CacheError)

#undef GEW_ERROR

}  // namespace gew
