#pragma once

#include <stdexcept>
#include <string>

namespace whh {

enum class ErrorCode {
    NotInvertibleInG,
    NotInG,
    RootOnAxis,
    PoleOnAxis,
    NotMatching,
    NotRightInvertible,
    NotInKernel,
    CaseUnsupported,
    DivergentIntegral,
    DegenerateBasis,
    FactorNotExact,
    Parse,
};

const char* error_name(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` identifies the failure and
/// `witness()` carries the offending location or value when one exists.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string witness = {})
        : std::runtime_error(std::string(error_name(code)) + ": " + message),
          code_(code), witness_(std::move(witness)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& witness() const noexcept { return witness_; }

private:
    ErrorCode code_;
    std::string witness_;
};

} // namespace whh
