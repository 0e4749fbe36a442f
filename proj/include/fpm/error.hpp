#pragma once

#include <stdexcept>
#include <string>

namespace fpm {

/// Base of every error raised by the library. Commands map these onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define FPM_DEFINE_ERROR(Name)                 \
    class Name : public Error {                \
    public:                                    \
        using Error::Error;                    \
    };

FPM_DEFINE_ERROR(IoError)
FPM_DEFINE_ERROR(NameParseError)
FPM_DEFINE_ERROR(EmptyCorpus)
FPM_DEFINE_ERROR(UnsupportedFormat)
FPM_DEFINE_ERROR(CorruptFile)
FPM_DEFINE_ERROR(ImageTooSmall)
FPM_DEFINE_ERROR(NonNegligibleImaginary)
FPM_DEFINE_ERROR(LengthMismatch)
FPM_DEFINE_ERROR(DimensionMismatch)
FPM_DEFINE_ERROR(DegenerateInput)
FPM_DEFINE_ERROR(SequenceTooShort)
FPM_DEFINE_ERROR(NoEligibleSubjects)
FPM_DEFINE_ERROR(ConfigError)
FPM_DEFINE_ERROR(FormatError)

#undef FPM_DEFINE_ERROR

}  // namespace fpm
