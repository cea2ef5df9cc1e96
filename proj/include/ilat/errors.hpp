#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ilat {

/**
 * @brief Base class for structured domain errors.
 *
 * Every failure mode that callers are expected to branch on gets its own
 * subclass with a stable machine-readable code (the class name).  The CLI
 * maps any ilat::Error to exit code 1 with a structured message; anything
 * else escaping to main is a genuine bug.
 */
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    /// Stable identifier for this error kind, e.g. "DenominatorNotUnit".
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define ILAT_DEFINE_ERROR(Name)                                             \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& message) : Error(#Name, message) {} \
    }

// padic
ILAT_DEFINE_ERROR(DenominatorNotUnit);
ILAT_DEFINE_ERROR(NotAUnit);
ILAT_DEFINE_ERROR(InsufficientPrecision);

// iwasawa
ILAT_DEFINE_ERROR(PrecisionMismatch);
ILAT_DEFINE_ERROR(IndistinguishableFromZero);
ILAT_DEFINE_ERROR(TruncationTooShort);

// bernoulli / kubota_leopoldt
ILAT_DEFINE_ERROR(RangeError);
ILAT_DEFINE_ERROR(EvenCharacter);

// reducibility
ILAT_DEFINE_ERROR(EigenvaluesNotDistinctModP);
ILAT_DEFINE_ERROR(EigenvaluesNotRational);
ILAT_DEFINE_ERROR(OrdTooSmall);
ILAT_DEFINE_ERROR(InfiniteWithinPrecision);

// lattice_classes
ILAT_DEFINE_ERROR(UncertifiedFactorization);
ILAT_DEFINE_ERROR(NotNested);

// delta_fixtures
ILAT_DEFINE_ERROR(OutOfRange);

#undef ILAT_DEFINE_ERROR

} // namespace ilat
