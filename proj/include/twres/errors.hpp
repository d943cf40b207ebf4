#pragma once

#include <stdexcept>
#include <string>

namespace twres {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define TWRES_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                           \
    public:                                                               \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    };

TWRES_DEFINE_ERROR(NotEisenstein)
TWRES_DEFINE_ERROR(PrecisionTooSmall)
TWRES_DEFINE_ERROR(PrecisionExhausted)
TWRES_DEFINE_ERROR(DomainError)
TWRES_DEFINE_ERROR(Singular)
TWRES_DEFINE_ERROR(RelationViolated)
TWRES_DEFINE_ERROR(SingularGammaMinusOne)
TWRES_DEFINE_ERROR(NotRegular)
TWRES_DEFINE_ERROR(ClubsuitViolated)
TWRES_DEFINE_ERROR(WindowOverflow)
TWRES_DEFINE_ERROR(ConfigError)
TWRES_DEFINE_ERROR(UnexpectedPole)

// Honest-truncation failures; the CLI maps these to exit code 2.
class TruncationError : public Error {
public:
    explicit TruncationError(const std::string& what) : Error(what) {}
};

class TailNonzero : public TruncationError {
public:
    explicit TailNonzero(const std::string& what) : TruncationError("TailNonzero: " + what) {}
};

class NoStabilization : public TruncationError {
public:
    explicit NoStabilization(const std::string& what)
        : TruncationError("NoStabilization: " + what) {}
};

#undef TWRES_DEFINE_ERROR

}  // namespace twres
