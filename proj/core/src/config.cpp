#include "aos/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "aos/error.hpp"

namespace aos {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Strips a trailing comment, ignoring '#' inside double-quoted strings.
std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) {
            quoted = !quoted;
        } else if (line[i] == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

bool bare_word(std::string_view v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '/' ||
               c == ':' || c == '+';
    });
}

json parse_value(std::string_view text) {
    text = trim(text);
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error&) {
        if (bare_word(text)) {
            return json(std::string(text));
        }
        throw;
    }
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
    KeyValueConfig config;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++number;
        const std::string_view line = trim(strip_comment(text.substr(pos, end - pos)));
        pos = end + 1;
        if (line.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(number) + ": empty key or value");
        }
        try {
            parse_value(value);
        } catch (const json::parse_error&) {
            throw ConfigError("line " + std::to_string(number) + ": cannot parse value of '" + key + "'");
        }
        if (!config.raw_.emplace(key, std::string(value)).second) {
            throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
        }
        if (end == text.size()) {
            break;
        }
    }
    return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path, "cannot open configuration file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse(buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

bool KeyValueConfig::contains(std::string_view key) const { return raw_.find(key) != raw_.end(); }

std::vector<std::string> KeyValueConfig::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : raw_) {
        out.push_back(k);
    }
    return out;
}

void KeyValueConfig::set(std::string_view key, std::string_view value_text) {
    try {
        parse_value(value_text);
    } catch (const json::parse_error&) {
        throw ConfigError("cannot parse value of '" + std::string(key) + "'");
    }
    raw_[std::string(key)] = std::string(trim(value_text));
}

namespace {

json value_of(const std::map<std::string, std::string, std::less<>>& raw, std::string_view key) {
    const auto it = raw.find(key);
    if (it == raw.end()) {
        throw ConfigError("missing key '" + std::string(key) + "'");
    }
    return parse_value(it->second);
}

[[noreturn]] void type_error(std::string_view key, const char* expected) {
    throw ConfigError("key '" + std::string(key) + "' must be " + expected);
}

std::uint64_t as_unsigned(const json& v, std::string_view key) {
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) {
            return static_cast<std::uint64_t>(d);
        }
    }
    type_error(key, "a non-negative integer");
}

}  // namespace

std::string KeyValueConfig::string(std::string_view key) const {
    const json v = value_of(raw_, key);
    if (!v.is_string()) {
        type_error(key, "a string");
    }
    return v.get<std::string>();
}

double KeyValueConfig::number(std::string_view key) const {
    const json v = value_of(raw_, key);
    if (!v.is_number()) {
        type_error(key, "a number");
    }
    return v.get<double>();
}

std::uint64_t KeyValueConfig::unsigned_integer(std::string_view key) const {
    return as_unsigned(value_of(raw_, key), key);
}

bool KeyValueConfig::boolean(std::string_view key) const {
    const json v = value_of(raw_, key);
    if (!v.is_boolean()) {
        type_error(key, "true or false");
    }
    return v.get<bool>();
}

std::vector<std::string> KeyValueConfig::strings(std::string_view key) const {
    const json v = value_of(raw_, key);
    if (v.is_string()) {
        return {v.get<std::string>()};
    }
    if (!v.is_array()) {
        type_error(key, "a list of strings");
    }
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) {
            type_error(key, "a list of strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::vector<double> KeyValueConfig::numbers(std::string_view key) const {
    const json v = value_of(raw_, key);
    if (v.is_number()) {
        return {v.get<double>()};
    }
    if (!v.is_array()) {
        type_error(key, "a list of numbers");
    }
    std::vector<double> out;
    for (const auto& item : v) {
        if (!item.is_number()) {
            type_error(key, "a list of numbers");
        }
        out.push_back(item.get<double>());
    }
    return out;
}

std::vector<std::uint64_t> KeyValueConfig::unsigned_integers(std::string_view key) const {
    const json v = value_of(raw_, key);
    if (!v.is_array()) {
        return {as_unsigned(v, key)};
    }
    std::vector<std::uint64_t> out;
    for (const auto& item : v) {
        out.push_back(as_unsigned(item, key));
    }
    return out;
}

// ---------------------------------------------------------------------------

const std::vector<std::string_view>& run_setting_keys() {
    static const std::vector<std::string_view> keys = {
        "instance",     "scheme",         "p_min",          "alpha",       "pursuit_rate",
        "ucb_c",        "epsilon",        "beta",           "gamma",       "credit_mode",
        "use_cluster",  "use_q",          "operators",      "weights",     "colony_size",
        "limit",        "budget",         "seed",           "transfer",    "experience_in",
        "experience_out", "output_dir",   "archive_capacity",
    };
    return keys;
}

RunSettings run_settings_from(const KeyValueConfig& config, RunSettings base, const std::filesystem::path& base_dir,
                              std::span<const std::string_view> extra_keys) {
    const auto& known = run_setting_keys();
    for (const auto& key : config.keys()) {
        if (std::find(known.begin(), known.end(), key) == known.end() &&
            std::find(extra_keys.begin(), extra_keys.end(), key) == extra_keys.end()) {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
    }
    auto path = [&](std::string_view key) {
        std::filesystem::path p = config.string(key);
        return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    auto size = [&](std::string_view key) { return static_cast<std::size_t>(config.unsigned_integer(key)); };

    RunSettings s = std::move(base);
    AbcConfig& abc = s.abc;
    if (config.contains("instance")) s.instance = path("instance");
    if (config.contains("scheme")) abc.scheme = parse_scheme(config.string("scheme"));
    if (config.contains("p_min")) abc.scheme_params.p_min = config.number("p_min");
    if (config.contains("alpha")) abc.scheme_params.alpha = config.number("alpha");
    if (config.contains("pursuit_rate")) abc.scheme_params.pursuit_rate = config.number("pursuit_rate");
    if (config.contains("ucb_c")) abc.scheme_params.ucb_c = config.number("ucb_c");
    if (config.contains("epsilon")) abc.scheme_params.epsilon = config.number("epsilon");
    if (config.contains("beta")) abc.credit_params.beta = config.number("beta");
    if (config.contains("gamma")) abc.credit_params.gamma = config.number("gamma");
    if (config.contains("credit_mode")) {
        const std::string mode = config.string("credit_mode");
        if (mode == "similarity") {
            abc.credit_params.mode = CreditMode::similarity;
        } else if (mode == "literal") {
            abc.credit_params.mode = CreditMode::literal;
        } else {
            throw ConfigError("credit_mode must be 'similarity' or 'literal'");
        }
    }
    if (config.contains("use_cluster")) abc.credit_params.use_cluster = config.boolean("use_cluster");
    if (config.contains("use_q")) abc.credit_params.use_q = config.boolean("use_q");
    if (config.contains("operators")) {
        const auto names = config.strings("operators");
        abc.operators = OperatorPool::parse(names);
    }
    if (config.contains("weights")) abc.weights = config.numbers("weights");
    if (config.contains("colony_size")) abc.colony_size = size("colony_size");
    if (config.contains("limit")) abc.limit = size("limit");
    if (config.contains("budget")) abc.budget = size("budget");
    if (config.contains("seed")) abc.seed = config.unsigned_integer("seed");
    if (config.contains("archive_capacity")) abc.archive_capacity = size("archive_capacity");
    if (config.contains("transfer")) s.transfer = parse_transfer_mode(config.string("transfer"));
    if (config.contains("experience_in")) s.experience_in = path("experience_in");
    if (config.contains("experience_out")) s.experience_out = path("experience_out");
    if (config.contains("output_dir")) s.output_dir = path("output_dir");
    return s;
}

}  // namespace aos
