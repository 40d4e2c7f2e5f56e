#include "aos/error.hpp"

namespace aos {

const char* to_string(ParseErrorKind kind) {
    switch (kind) {
    case ParseErrorKind::malformed_header: return "malformed header";
    case ParseErrorKind::malformed_value: return "malformed value";
    case ParseErrorKind::dimension_mismatch: return "dimension mismatch";
    case ParseErrorKind::negative_value: return "negative value";
    case ParseErrorKind::empty_item: return "empty item";
    }
    return "parse error";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
    : Error(std::string(to_string(kind)) + " at line " + std::to_string(line) + ": " + detail),
      kind_(kind),
      line_(line) {}

IoError::IoError(const std::filesystem::path& path, const std::string& what)
    : Error(path.string() + ": " + what), path_(path) {}

namespace {
const char* experience_prefix(ExperienceErrorKind kind) {
    switch (kind) {
    case ExperienceErrorKind::version: return "unsupported experience version: ";
    case ExperienceErrorKind::dimension: return "experience dimension mismatch: ";
    case ExperienceErrorKind::corrupt: return "corrupt experience file: ";
    }
    return "";
}
}  // namespace

ExperienceError::ExperienceError(ExperienceErrorKind kind, const std::string& detail)
    : Error(experience_prefix(kind) + detail), kind_(kind) {}

}  // namespace aos
