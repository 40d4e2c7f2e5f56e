#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aos/abc.hpp"
#include "aos/credit.hpp"

namespace aos {

/// `key = value` configuration text.
///
/// One entry per line, `#` starts a comment. A value is a JSON scalar or array
/// (`0.3`, `"rl"`, `["flip1", "flipk:3"]`, `true`); a bare word such as
/// `rl` is read as a string. Duplicate keys are rejected.
class KeyValueConfig {
public:
    /// Throws ConfigError naming the offending line.
    static KeyValueConfig parse(std::string_view text);
    /// IoError when the file cannot be read.
    static KeyValueConfig load(const std::filesystem::path& path);

    bool contains(std::string_view key) const;
    std::vector<std::string> keys() const;

    // Typed accessors throw ConfigError on a type mismatch or missing key.
    std::string string(std::string_view key) const;
    double number(std::string_view key) const;
    std::uint64_t unsigned_integer(std::string_view key) const;
    bool boolean(std::string_view key) const;
    std::vector<std::string> strings(std::string_view key) const;
    std::vector<double> numbers(std::string_view key) const;
    std::vector<std::uint64_t> unsigned_integers(std::string_view key) const;

    /// Overrides or adds an entry; the value is parsed like a file value.
    void set(std::string_view key, std::string_view value_text);

private:
    std::map<std::string, std::string, std::less<>> raw_;
};

/// Settings of a single solver run.
struct RunSettings {
    std::optional<std::filesystem::path> instance;
    AbcConfig abc;
    TransferMode transfer = TransferMode::fresh;
    std::optional<std::filesystem::path> experience_in;
    std::optional<std::filesystem::path> experience_out;
    std::optional<std::filesystem::path> output_dir;
};

/// Keys recognised by run_settings_from.
const std::vector<std::string_view>& run_setting_keys();

/// Applies every recognised key to `base`; unknown keys are ConfigErrors.
/// Relative paths are resolved against `base_dir`.
RunSettings run_settings_from(const KeyValueConfig& config, RunSettings base = {},
                              const std::filesystem::path& base_dir = {},
                              std::span<const std::string_view> extra_keys = {});

}  // namespace aos
