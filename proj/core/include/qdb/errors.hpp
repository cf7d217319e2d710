#pragma once

#include <stdexcept>
#include <string>

namespace qdb {

/// Engine-wide error classification. Every throwing path in the core
/// library raises qdb::Error with one of these codes so callers (and
/// tests) can dispatch on the failure kind instead of parsing messages.
enum class ErrorCode {
    IndexOutOfRange,
    OverlappingOperands,
    CapacityExceeded,
    UnknownGateDuration,
    InvalidCounts,
    ZeroMatches,
    UnsupportedPredicate,
    WidthOverflow,
    ZeroVector,
    DimensionMismatch,
    ValueOutOfBounds,
    InfeasibleSelectivity,
    DuplicateTable,
    SchemaMismatch,
    ParseError,
    SyntaxError,
    UnsupportedFeature,
    UnknownTable,
    UnknownColumn,
    TypeMismatch,
    NoIndex,
    LayerErrorOverflow,
    UnknownOperator,
    NoCrossover,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace qdb
