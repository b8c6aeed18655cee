#include "scrub/error.hpp"

namespace scrub {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MALFORMED_BUNDLE: return "MALFORMED_BUNDLE";
        case ErrorCode::EMPTY_REPOSITORY: return "EMPTY_REPOSITORY";
        case ErrorCode::CALLBACK_FAILURE: return "CALLBACK_FAILURE";
        case ErrorCode::EMPTY_TREE: return "EMPTY_TREE";
        case ErrorCode::NO_REFS: return "NO_REFS";
        case ErrorCode::NETWORK: return "NETWORK";
        case ErrorCode::UNSUPPORTED_LANGUAGE: return "UNSUPPORTED_LANGUAGE";
        case ErrorCode::RULES_FILE_INVALID: return "RULES_FILE_INVALID";
        case ErrorCode::EMPTY_DICTIONARY: return "EMPTY_DICTIONARY";
        case ErrorCode::NER_UNAVAILABLE: return "NER_UNAVAILABLE";
        case ErrorCode::EMPTY_SALT: return "EMPTY_SALT";
        case ErrorCode::UNMASKABLE_CATEGORY: return "UNMASKABLE_CATEGORY";
        case ErrorCode::SPAN_OUT_OF_RANGE: return "SPAN_OUT_OF_RANGE";
        case ErrorCode::POST_SCAN_RESIDUAL: return "POST_SCAN_RESIDUAL";
        case ErrorCode::EMPTY_INPUT: return "EMPTY_INPUT";
        case ErrorCode::BACKEND_UNAVAILABLE: return "BACKEND_UNAVAILABLE";
        case ErrorCode::INVALID_MODEL: return "INVALID_MODEL";
        case ErrorCode::CONFIG_INVALID: return "CONFIG_INVALID";
        case ErrorCode::IO_ERROR: return "IO_ERROR";
    }
    return "UNKNOWN";
}

}  // namespace scrub
