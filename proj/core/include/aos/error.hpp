#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace aos {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
    malformed_header,
    malformed_value,
    dimension_mismatch,
    negative_value,
    empty_item,
};

const char* to_string(ParseErrorKind kind);

/// Instance-file parse failure. `line()` is 1-based; 0 means end of input.
class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail);

    ParseErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    ParseErrorKind kind_;
    std::size_t line_;
};

/// Vector lengths or model shapes that do not agree with the instance or run.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value (unknown scheme, out-of-range parameter, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::filesystem::path& path, const std::string& what);

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

enum class ExperienceErrorKind { version, dimension, corrupt };

class ExperienceError : public Error {
public:
    ExperienceError(ExperienceErrorKind kind, const std::string& detail);

    ExperienceErrorKind kind() const noexcept { return kind_; }

private:
    ExperienceErrorKind kind_;
};

}  // namespace aos
