#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aos/rng.hpp"

namespace aos {

/// Binary decision vector over the items of an instance.
class BitSolution {
public:
    BitSolution() = default;
    explicit BitSolution(std::size_t length) : bits_(length, 0) {}
    explicit BitSolution(std::vector<std::uint8_t> bits);

    /// Parses a string of '0'/'1' characters; throws std::invalid_argument.
    static BitSolution from_string(std::string_view text);

    std::size_t size() const noexcept { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool value) { bits_[i] = value ? 1 : 0; }
    void flip(std::size_t i) { bits_[i] ^= 1; }

    std::size_t count() const noexcept;
    std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    std::string to_string() const;

    // Lexicographic on the bit sequence, item 0 first.
    friend auto operator<=>(const BitSolution&, const BitSolution&) = default;
    friend bool operator==(const BitSolution&, const BitSolution&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

std::size_t hamming_distance(const BitSolution& a, const BitSolution& b);

/// Set Union Knapsack instance with one or more profit objectives.
///
/// Item i covers the element subset U_i; a selection costs the total weight of
/// the union of covered elements and must stay within the capacity. Profits
/// are additive over items, one row per objective. Immutable once built.
class SukpInstance {
public:
    /// Validates the invariants and throws std::invalid_argument on violation:
    /// equal-length profit rows, an m x n membership matrix, no empty item,
    /// finite non-negative profits/weights/capacity.
    SukpInstance(std::vector<std::vector<double>> profits, std::vector<double> weights,
                 std::vector<std::vector<std::uint8_t>> membership, double capacity);

    std::size_t item_count() const noexcept { return item_count_; }
    std::size_t element_count() const noexcept { return weights_.size(); }
    std::size_t objective_count() const noexcept { return profits_.size(); }

    double capacity() const noexcept { return capacity_; }
    double profit(std::size_t objective, std::size_t item) const { return profits_[objective][item]; }
    std::span<const double> profits(std::size_t objective) const { return profits_[objective]; }
    std::span<const double> weights() const noexcept { return weights_; }
    double total_weight() const noexcept { return total_weight_; }
    double total_profit(std::size_t objective) const { return total_profit_[objective]; }

    bool contains(std::size_t item, std::size_t element) const;
    std::span<const std::uint32_t> item_elements(std::size_t item) const { return elements_[item]; }
    std::span<const std::uint64_t> item_words(std::size_t item) const;
    std::size_t word_count() const noexcept { return word_count_; }

private:
    std::size_t item_count_;
    std::size_t word_count_;
    std::vector<std::vector<double>> profits_;
    std::vector<double> weights_;
    double capacity_;
    double total_weight_ = 0.0;
    std::vector<double> total_profit_;
    std::vector<std::uint64_t> words_;
    std::vector<std::vector<std::uint32_t>> elements_;
};

struct Evaluation {
    std::vector<double> objectives;
    double union_weight = 0.0;
    bool feasible = true;

    friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

SukpInstance parse_instance(std::string_view text);
/// Reads and parses a file; IoError when unreadable, ParseError when malformed.
SukpInstance load_instance(const std::filesystem::path& path);
std::string format_instance(const SukpInstance& instance);
void save_instance(const SukpInstance& instance, const std::filesystem::path& path);

/// Throws DimensionError when x does not have item_count bits.
Evaluation evaluate(const SukpInstance& instance, const BitSolution& x);

/// Weight of the union of element sets covered by a 64-bit element mask.
double union_weight_of(const SukpInstance& instance, std::span<const std::uint64_t> words);

double weighted_sum(std::span<const double> objectives, std::span<const double> weights);

/// Greedy density repair. Drops, one at a time, the selected item with the
/// smallest ratio of weighted profit to marginal union weight (the weight only
/// that item contributes), recomputing marginals after each drop, until the
/// selection fits. Items whose marginal weight is zero rank last; ties go to
/// the lower weighted profit, then the lower index. An empty `objective_weights`
/// means equal weights. Returns x unchanged when x is already feasible.
BitSolution repair(const SukpInstance& instance, BitSolution x,
                   std::span<const double> objective_weights = {});

struct Optimum {
    BitSolution solution;
    Evaluation evaluation;
    double fitness = 0.0;
};

inline constexpr std::size_t kBruteForceMaxItems = 24;

/// Exhaustive search over all 2^m selections for the feasible one with the
/// largest weighted objective sum; ties go to the lexicographically smallest
/// bit vector. Throws std::length_error when m exceeds kBruteForceMaxItems.
Optimum brute_force_optimum(const SukpInstance& instance, std::span<const double> objective_weights);

struct GeneratorParams {
    std::size_t items = 100;
    std::size_t elements = 100;
    std::size_t objectives = 1;
    double density = 0.1;
    double capacity_ratio = 0.5;
};

/// Random instance: integer profits and weights in [1, 100], membership bits
/// set with probability `density` (an empty row gets one random bit), capacity
/// = capacity_ratio * total weight. Throws std::invalid_argument on bad ranges.
SukpInstance generate_instance(Rng& rng, const GeneratorParams& params);

}  // namespace aos
