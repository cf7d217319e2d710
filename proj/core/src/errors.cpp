#include "qdb/errors.hpp"

namespace qdb {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::OverlappingOperands: return "OverlappingOperands";
        case ErrorCode::CapacityExceeded: return "CapacityExceeded";
        case ErrorCode::UnknownGateDuration: return "UnknownGateDuration";
        case ErrorCode::InvalidCounts: return "InvalidCounts";
        case ErrorCode::ZeroMatches: return "ZeroMatches";
        case ErrorCode::UnsupportedPredicate: return "UnsupportedPredicate";
        case ErrorCode::WidthOverflow: return "WidthOverflow";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ValueOutOfBounds: return "ValueOutOfBounds";
        case ErrorCode::InfeasibleSelectivity: return "InfeasibleSelectivity";
        case ErrorCode::DuplicateTable: return "DuplicateTable";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UnsupportedFeature: return "UnsupportedFeature";
        case ErrorCode::UnknownTable: return "UnknownTable";
        case ErrorCode::UnknownColumn: return "UnknownColumn";
        case ErrorCode::TypeMismatch: return "TypeMismatch";
        case ErrorCode::NoIndex: return "NoIndex";
        case ErrorCode::LayerErrorOverflow: return "LayerErrorOverflow";
        case ErrorCode::UnknownOperator: return "UnknownOperator";
        case ErrorCode::NoCrossover: return "NoCrossover";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace qdb
