#pragma once

#include <stdexcept>
#include <string>

namespace condexp {

enum class ErrorCode {
    EmptyInput,
    NegativeWeight,
    ZeroMass,
    NonFinite,
    SizeMismatch,
    IndexOutOfRange,
    InvalidArgument,
    NotMeasurable,
    NotRefinement,
    DegenerateBasis,
    Parse,
    UnknownName,
};

const char* to_string(ErrorCode code) noexcept;

/// Every validation failure in the library is reported through this type;
/// callers that need to branch on the failure inspect code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace condexp
