#include "repro/error.hpp"

#include <fmt/format.h>

namespace repro {

std::string_view category_name(ErrorCategory category) noexcept {
    switch (category) {
        case ErrorCategory::Parse: return "parse";
        case ErrorCategory::Input: return "input";
        case ErrorCategory::Undefined: return "undefined";
        case ErrorCategory::Io: return "io";
        case ErrorCategory::Config: return "config";
    }
    return "unknown";
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error(ErrorCategory::Parse,
            line == 0 ? message : fmt::format("line {}: {}", line, message)),
      line_(line) {}

ParseError ParseError::in_source(std::string_view source) const {
    return ParseError(Verbatim{}, line_, fmt::format("{}: {}", source, what()));
}

} // namespace repro
