#include "aos/problem.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "aos/error.hpp"
#include "aos/format.hpp"

namespace aos {

// ---------------------------------------------------------------------------
// BitSolution

BitSolution::BitSolution(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) {
        b = b != 0 ? 1 : 0;
    }
}

BitSolution BitSolution::from_string(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bit string may only contain 0 and 1");
        }
        bits.push_back(c == '1' ? 1 : 0);
    }
    return BitSolution(std::move(bits));
}

std::size_t BitSolution::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string BitSolution::to_string() const {
    std::string out(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i] != 0) {
            out[i] = '1';
        }
    }
    return out;
}

std::size_t hamming_distance(const BitSolution& a, const BitSolution& b) {
    if (a.size() != b.size()) {
        throw DimensionError("hamming_distance: length mismatch");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d += a[i] != b[i] ? 1 : 0;
    }
    return d;
}

// ---------------------------------------------------------------------------
// SukpInstance

namespace {

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

SukpInstance::SukpInstance(std::vector<std::vector<double>> profits, std::vector<double> weights,
                           std::vector<std::vector<std::uint8_t>> membership, double capacity)
    : item_count_(membership.size()),
      word_count_((weights.size() + 63) / 64),
      profits_(std::move(profits)),
      weights_(std::move(weights)),
      capacity_(capacity) {
    if (item_count_ == 0) {
        throw std::invalid_argument("instance needs at least one item");
    }
    if (weights_.empty()) {
        throw std::invalid_argument("instance needs at least one element");
    }
    if (profits_.empty()) {
        throw std::invalid_argument("instance needs at least one objective");
    }
    if (!finite_non_negative(capacity_)) {
        throw std::invalid_argument("capacity must be finite and non-negative");
    }
    for (const auto& row : profits_) {
        if (row.size() != item_count_) {
            throw std::invalid_argument("profit row length differs from item count");
        }
        if (!std::all_of(row.begin(), row.end(), finite_non_negative)) {
            throw std::invalid_argument("profits must be finite and non-negative");
        }
    }
    if (!std::all_of(weights_.begin(), weights_.end(), finite_non_negative)) {
        throw std::invalid_argument("weights must be finite and non-negative");
    }

    const std::size_t n = weights_.size();
    words_.assign(item_count_ * word_count_, 0);
    elements_.resize(item_count_);
    for (std::size_t i = 0; i < item_count_; ++i) {
        if (membership[i].size() != n) {
            throw std::invalid_argument("membership row length differs from element count");
        }
        for (std::size_t e = 0; e < n; ++e) {
            if (membership[i][e] != 0) {
                words_[i * word_count_ + e / 64] |= std::uint64_t{1} << (e % 64);
                elements_[i].push_back(static_cast<std::uint32_t>(e));
            }
        }
        if (elements_[i].empty()) {
            throw std::invalid_argument("item " + std::to_string(i) + " covers no element");
        }
    }

    for (double w : weights_) {
        total_weight_ += w;
    }
    total_profit_.reserve(profits_.size());
    for (const auto& row : profits_) {
        total_profit_.push_back(std::accumulate(row.begin(), row.end(), 0.0));
    }
}

bool SukpInstance::contains(std::size_t item, std::size_t element) const {
    return (words_[item * word_count_ + element / 64] >> (element % 64)) & 1U;
}

std::span<const std::uint64_t> SukpInstance::item_words(std::size_t item) const {
    return std::span<const std::uint64_t>(words_).subspan(item * word_count_, word_count_);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++number;
        std::string_view raw = text.substr(pos, end - pos);
        if (auto hash = raw.find('#'); hash != std::string_view::npos) {
            raw = raw.substr(0, hash);
        }
        std::istringstream in{std::string(raw)};
        Line line{number, {}};
        for (std::string tok; in >> tok;) {
            line.tokens.push_back(std::move(tok));
        }
        if (!line.tokens.empty()) {
            lines.push_back(std::move(line));
        }
        if (end == text.size()) {
            break;
        }
        pos = end + 1;
    }
    return lines;
}

double to_value(const std::string& token, std::size_t line) {
    double v = 0.0;
    try {
        v = parse_double(token);
    } catch (const std::invalid_argument&) {
        throw ParseError(ParseErrorKind::malformed_value, line, "'" + token + "' is not a number");
    }
    if (!std::isfinite(v)) {
        throw ParseError(ParseErrorKind::malformed_value, line, "'" + token + "' is not finite");
    }
    if (v < 0.0) {
        throw ParseError(ParseErrorKind::negative_value, line, "'" + token + "' is negative");
    }
    return v;
}

std::size_t to_dimension(const std::string& token, std::size_t line) {
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || end != token.data() + token.size() || value == 0) {
        throw ParseError(ParseErrorKind::malformed_header, line,
                         "expected a positive integer, got '" + token + "'");
    }
    return value;
}

std::vector<double> to_row(const Line& line, std::size_t expected, const char* what) {
    if (line.tokens.size() != expected) {
        throw ParseError(ParseErrorKind::dimension_mismatch, line.number,
                         std::string(what) + " row has " + std::to_string(line.tokens.size()) +
                             " entries, expected " + std::to_string(expected));
    }
    std::vector<double> row;
    row.reserve(expected);
    for (const auto& tok : line.tokens) {
        row.push_back(to_value(tok, line.number));
    }
    return row;
}

}  // namespace

SukpInstance parse_instance(std::string_view text) {
    const auto lines = tokenize(text);
    std::size_t cursor = 0;
    const std::size_t eof_line = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1;
    auto next = [&](const char* what) -> const Line& {
        if (cursor >= lines.size()) {
            throw ParseError(ParseErrorKind::dimension_mismatch, eof_line,
                             std::string("unexpected end of input, expected ") + what);
        }
        return lines[cursor++];
    };

    if (lines.empty()) {
        throw ParseError(ParseErrorKind::malformed_header, eof_line, "empty instance");
    }
    const Line& header = next("header");
    if (header.tokens.size() != 3) {
        throw ParseError(ParseErrorKind::malformed_header, header.number,
                         "header must be 'items elements objectives'");
    }
    const std::size_t m = to_dimension(header.tokens[0], header.number);
    const std::size_t n = to_dimension(header.tokens[1], header.number);
    const std::size_t objectives = to_dimension(header.tokens[2], header.number);

    const Line& cap_line = next("capacity");
    if (cap_line.tokens.size() != 1) {
        throw ParseError(ParseErrorKind::dimension_mismatch, cap_line.number,
                         "capacity line must hold one value");
    }
    const double capacity = to_value(cap_line.tokens[0], cap_line.number);

    std::vector<std::vector<double>> profits;
    for (std::size_t j = 0; j < objectives; ++j) {
        profits.push_back(to_row(next("profit row"), m, "profit"));
    }
    std::vector<double> weights = to_row(next("weight row"), n, "weight");

    std::vector<std::vector<std::uint8_t>> membership;
    membership.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Line& line = next("membership row");
        if (line.tokens.size() != n) {
            throw ParseError(ParseErrorKind::dimension_mismatch, line.number,
                             "membership row has " + std::to_string(line.tokens.size()) +
                                 " entries, expected " + std::to_string(n));
        }
        std::vector<std::uint8_t> row(n, 0);
        bool any = false;
        for (std::size_t e = 0; e < n; ++e) {
            const auto& tok = line.tokens[e];
            if (tok == "1") {
                row[e] = 1;
                any = true;
            } else if (tok != "0") {
                throw ParseError(ParseErrorKind::malformed_value, line.number,
                                 "membership entries must be 0 or 1, got '" + tok + "'");
            }
        }
        if (!any) {
            throw ParseError(ParseErrorKind::empty_item, line.number,
                             "item " + std::to_string(i) + " covers no element");
        }
        membership.push_back(std::move(row));
    }
    if (cursor != lines.size()) {
        throw ParseError(ParseErrorKind::dimension_mismatch, lines[cursor].number,
                         "unexpected data after the membership matrix");
    }
    return SukpInstance(std::move(profits), std::move(weights), std::move(membership), capacity);
}

SukpInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path, "cannot open instance file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_instance(buffer.str());
}

std::string format_instance(const SukpInstance& instance) {
    std::string out;
    const std::size_t m = instance.item_count();
    const std::size_t n = instance.element_count();
    out += std::to_string(m) + ' ' + std::to_string(n) + ' ' +
           std::to_string(instance.objective_count()) + "  # items elements objectives\n";
    out += format_double(instance.capacity()) + "  # capacity\n";
    auto append_row = [&out](std::span<const double> row) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            out += (k ? " " : "") + format_double(row[k]);
        }
        out += '\n';
    };
    for (std::size_t j = 0; j < instance.objective_count(); ++j) {
        append_row(instance.profits(j));
    }
    append_row(instance.weights());
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t e = 0; e < n; ++e) {
            out += e ? " " : "";
            out += instance.contains(i, e) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

void save_instance(const SukpInstance& instance, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path, "cannot open for writing");
    }
    out << format_instance(instance);
    if (!out) {
        throw IoError(path, "write failed");
    }
}

// ---------------------------------------------------------------------------
// Evaluation and repair

double union_weight_of(const SukpInstance& instance, std::span<const std::uint64_t> words) {
    const auto weights = instance.weights();
    double total = 0.0;
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t bits = words[w];
        while (bits != 0) {
            const auto e = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
            total += weights[e];
            bits &= bits - 1;
        }
    }
    return total;
}

Evaluation evaluate(const SukpInstance& instance, const BitSolution& x) {
    if (x.size() != instance.item_count()) {
        throw DimensionError("evaluate: solution has " + std::to_string(x.size()) + " bits, instance has " +
                             std::to_string(instance.item_count()) + " items");
    }
    Evaluation ev;
    ev.objectives.assign(instance.objective_count(), 0.0);
    std::vector<std::uint64_t> covered(instance.word_count(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x[i]) {
            continue;
        }
        const auto row = instance.item_words(i);
        for (std::size_t w = 0; w < row.size(); ++w) {
            covered[w] |= row[w];
        }
        for (std::size_t j = 0; j < ev.objectives.size(); ++j) {
            ev.objectives[j] += instance.profit(j, i);
        }
    }
    ev.union_weight = union_weight_of(instance, covered);
    ev.feasible = ev.union_weight <= instance.capacity();
    return ev;
}

double weighted_sum(std::span<const double> objectives, std::span<const double> weights) {
    if (objectives.size() != weights.size()) {
        throw DimensionError("weighted_sum: objective and weight lengths differ");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < objectives.size(); ++j) {
        total += weights[j] * objectives[j];
    }
    return total;
}

BitSolution repair(const SukpInstance& instance, BitSolution x, std::span<const double> objective_weights) {
    if (x.size() != instance.item_count()) {
        throw DimensionError("repair: solution length differs from item count");
    }
    const std::size_t objectives = instance.objective_count();
    std::vector<double> uniform;
    if (objective_weights.empty()) {
        uniform.assign(objectives, 1.0 / static_cast<double>(objectives));
        objective_weights = uniform;
    } else if (objective_weights.size() != objectives) {
        throw DimensionError("repair: weight vector length differs from objective count");
    }

    const auto weights = instance.weights();
    std::vector<std::uint32_t> cover(instance.element_count(), 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i]) {
            for (auto e : instance.item_elements(i)) {
                ++cover[e];
            }
        }
    }
    std::vector<std::uint64_t> words(instance.word_count(), 0);
    auto current_weight = [&] {
        std::fill(words.begin(), words.end(), 0);
        for (std::size_t e = 0; e < cover.size(); ++e) {
            if (cover[e] != 0) {
                words[e / 64] |= std::uint64_t{1} << (e % 64);
            }
        }
        return union_weight_of(instance, words);
    };

    while (current_weight() > instance.capacity()) {
        std::size_t drop = x.size();
        double best_ratio = 0.0;
        double best_profit = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!x[i]) {
                continue;
            }
            double marginal = 0.0;
            for (auto e : instance.item_elements(i)) {
                if (cover[e] == 1) {
                    marginal += weights[e];
                }
            }
            double profit = 0.0;
            for (std::size_t j = 0; j < objectives; ++j) {
                profit += objective_weights[j] * instance.profit(j, i);
            }
            const double ratio = marginal > 0.0 ? profit / marginal : std::numeric_limits<double>::infinity();
            if (drop == x.size() || ratio < best_ratio || (ratio == best_ratio && profit < best_profit)) {
                drop = i;
                best_ratio = ratio;
                best_profit = profit;
            }
        }
        // Unreachable while capacity >= 0: an over-capacity union has a selected item.
        if (drop == x.size()) {
            break;
        }
        x.set(drop, false);
        for (auto e : instance.item_elements(drop)) {
            --cover[e];
        }
    }
    return x;
}

Optimum brute_force_optimum(const SukpInstance& instance, std::span<const double> objective_weights) {
    const std::size_t m = instance.item_count();
    if (m > kBruteForceMaxItems) {
        throw std::length_error("brute_force_optimum: " + std::to_string(m) + " items exceeds the limit of " +
                                std::to_string(kBruteForceMaxItems));
    }
    if (objective_weights.size() != instance.objective_count()) {
        throw DimensionError("brute_force_optimum: weight vector length differs from objective count");
    }

    // Bit (m-1-i) of the mask is item i, so ascending masks visit bit vectors
    // in lexicographic order and a strict improvement test keeps the smallest.
    Optimum best{BitSolution(m), {}, 0.0};
    best.evaluation = evaluate(instance, best.solution);
    best.fitness = weighted_sum(best.evaluation.objectives, objective_weights);
    BitSolution x(m);
    const std::uint64_t limit = std::uint64_t{1} << m;
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
        for (std::size_t i = 0; i < m; ++i) {
            x.set(i, (mask >> (m - 1 - i)) & 1U);
        }
        Evaluation ev = evaluate(instance, x);
        if (!ev.feasible) {
            continue;
        }
        const double fitness = weighted_sum(ev.objectives, objective_weights);
        if (fitness > best.fitness) {
            best = Optimum{x, std::move(ev), fitness};
        }
    }
    return best;
}

SukpInstance generate_instance(Rng& rng, const GeneratorParams& params) {
    if (params.items == 0 || params.elements == 0 || params.objectives == 0) {
        throw std::invalid_argument("generate_instance: dimensions must be positive");
    }
    if (!(params.density > 0.0 && params.density <= 1.0)) {
        throw std::invalid_argument("generate_instance: density must lie in (0, 1]");
    }
    if (!(params.capacity_ratio > 0.0 && params.capacity_ratio <= 1.0)) {
        throw std::invalid_argument("generate_instance: capacity_ratio must lie in (0, 1]");
    }
    auto draw_integer = [&rng] { return static_cast<double>(1 + rng.uniform_index(100)); };

    std::vector<std::vector<double>> profits(params.objectives, std::vector<double>(params.items));
    for (auto& row : profits) {
        for (auto& p : row) {
            p = draw_integer();
        }
    }
    std::vector<double> weights(params.elements);
    for (auto& w : weights) {
        w = draw_integer();
    }
    std::vector<std::vector<std::uint8_t>> membership(params.items, std::vector<std::uint8_t>(params.elements, 0));
    for (auto& row : membership) {
        bool any = false;
        for (auto& bit : row) {
            bit = params.density >= 1.0 || rng.bernoulli(params.density) ? 1 : 0;
            any = any || bit != 0;
        }
        if (!any) {
            row[rng.uniform_index(params.elements)] = 1;
        }
    }
    double total = 0.0;
    for (double w : weights) {
        total += w;
    }
    return SukpInstance(std::move(profits), std::move(weights), std::move(membership),
                        params.capacity_ratio * total);
}

}  // namespace aos
