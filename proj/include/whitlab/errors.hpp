#pragma once

#include <stdexcept>
#include <string>

namespace whitlab {

// Every failure raised by the library derives from this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
    // Numerical failures map to CLI exit code 2, everything else to 1.
    virtual bool numerical() const noexcept { return false; }
};

#define WHITLAB_ERROR(Name, Numerical)                                        \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {}  \
        const char* kind() const noexcept override { return #Name; }          \
        bool numerical() const noexcept override { return Numerical; }        \
    };

WHITLAB_ERROR(PoleError, false)
WHITLAB_ERROR(RangeError, false)
WHITLAB_ERROR(DomainError, false)
WHITLAB_ERROR(NonConvergence, true)
WHITLAB_ERROR(DecayProbeFailed, true)
WHITLAB_ERROR(DimensionUnsupported, true)
WHITLAB_ERROR(StripExhausted, false)
WHITLAB_ERROR(ArityMismatch, false)
WHITLAB_ERROR(StepInvalid, false)
WHITLAB_ERROR(RankUnsupported, true)
WHITLAB_ERROR(KappaOutOfRange, false)
WHITLAB_ERROR(NoPrintedVector, false)
WHITLAB_ERROR(GammaArgumentViolation, false)
WHITLAB_ERROR(PreconditionViolated, false)
WHITLAB_ERROR(ParameterConstraintViolated, false)
WHITLAB_ERROR(DegenerateSample, false)

#undef WHITLAB_ERROR

}  // namespace whitlab
