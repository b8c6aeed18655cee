#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scrub {

enum class ErrorCode {
    MALFORMED_BUNDLE,
    EMPTY_REPOSITORY,
    CALLBACK_FAILURE,
    EMPTY_TREE,
    NO_REFS,
    NETWORK,
    UNSUPPORTED_LANGUAGE,
    RULES_FILE_INVALID,
    EMPTY_DICTIONARY,
    NER_UNAVAILABLE,
    EMPTY_SALT,
    UNMASKABLE_CATEGORY,
    SPAN_OUT_OF_RANGE,
    POST_SCAN_RESIDUAL,
    EMPTY_INPUT,
    BACKEND_UNAVAILABLE,
    INVALID_MODEL,
    CONFIG_INVALID,
    IO_ERROR,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace scrub
