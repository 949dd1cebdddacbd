#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace repro {

/// Coarse failure classes. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
    Parse,     // malformed run / qrels / manifest content
    Input,     // well-formed but incompatible inputs (topic mismatch, misalignment)
    Undefined, // measure is mathematically undefined for the given data
    Io,        // files, network
    Config,    // bad flags or configuration values
};

std::string_view category_name(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message);

    /// 1-based line number; 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

    /// Same error with the message prefixed by the input's name.
    ParseError in_source(std::string_view source) const;

private:
    struct Verbatim {};
    ParseError(Verbatim, std::size_t line, const std::string& message)
        : Error(ErrorCategory::Parse, message), line_(line) {}

    std::size_t line_;
};

/// Non-fatal diagnostics, kept in the order they were raised.
class Warnings {
public:
    void add(std::string message) { items_.push_back(std::move(message)); }
    void append(const Warnings& other) {
        items_.insert(items_.end(), other.items_.begin(), other.items_.end());
    }

    const std::vector<std::string>& items() const noexcept { return items_; }
    bool empty() const noexcept { return items_.empty(); }
    std::size_t size() const noexcept { return items_.size(); }

private:
    std::vector<std::string> items_;
};

inline void warn(Warnings* sink, std::string message) {
    if (sink != nullptr) sink->add(std::move(message));
}

} // namespace repro
