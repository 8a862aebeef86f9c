#include "condexp/error.hpp"

namespace condexp {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::EmptyInput: return "empty input";
    case ErrorCode::NegativeWeight: return "negative weight";
    case ErrorCode::ZeroMass: return "zero total mass";
    case ErrorCode::NonFinite: return "non-finite value";
    case ErrorCode::SizeMismatch: return "size mismatch";
    case ErrorCode::IndexOutOfRange: return "index out of range";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::NotMeasurable: return "not measurable";
    case ErrorCode::NotRefinement: return "not a refinement";
    case ErrorCode::DegenerateBasis: return "degenerate basis";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::UnknownName: return "unknown name";
    }
    return "unknown error";
}

}  // namespace condexp
