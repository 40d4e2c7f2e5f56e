#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "aos/credit.hpp"
#include "aos/operators.hpp"
#include "aos/rng.hpp"

namespace aos {

enum class SchemeKind { random, pm, ap, ucb, rl };

std::string_view to_string(SchemeKind kind);
/// Throws ConfigError listing the valid names.
SchemeKind parse_scheme(std::string_view text);

struct SchemeParams {
    double p_min = 0.05;        // probability floor (pm, ap)
    double alpha = 0.1;         // recency weight of the empirical quality
    double pursuit_rate = 0.8;  // ap
    double ucb_c = 1.0;         // ucb exploration constant
    double epsilon = 0.1;       // rl exploration rate

    friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

/// Non-negative objective weights summing to one.
class WeightVector {
public:
    /// Throws ConfigError when a weight is outside [0, 1] or the sum is not 1
    /// within 1e-9.
    explicit WeightVector(std::vector<double> weights);

    static WeightVector uniform(std::size_t objectives);
    /// Unit vector e_j.
    static WeightVector unit(std::size_t objectives, std::size_t j);

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t j) const { return weights_[j]; }
    std::span<const double> values() const noexcept { return weights_; }

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<double> weights_;
};

/// Mutable state of one selection scheme over a fixed pool size.
class SchemeState {
public:
    /// Throws ConfigError for an empty pool or out-of-range parameters
    /// (including pool_size * p_min > 1 for pm/ap).
    SchemeState(SchemeKind kind, std::size_t pool_size, SchemeParams params = {});

    SchemeKind kind() const noexcept { return kind_; }
    std::size_t pool_size() const noexcept { return quality_.size(); }
    const SchemeParams& params() const noexcept { return params_; }

    /// Selection probabilities (pm, ap); uniform for the other kinds.
    std::span<const double> probabilities() const noexcept { return probabilities_; }
    std::span<const double> empirical_quality() const noexcept { return quality_; }
    std::span<const std::uint64_t> pull_counts() const noexcept { return pulls_; }

    friend bool operator==(const SchemeState&, const SchemeState&) = default;

private:
    friend OperatorId select_operator(const SchemeState&, const CreditView&, const WeightVector&, Rng&);
    friend void update_scheme(SchemeState&, OperatorId, double);

    SchemeKind kind_;
    SchemeParams params_;
    std::vector<double> probabilities_;
    std::vector<double> quality_;
    std::vector<std::uint64_t> pulls_;
};

/// Weighted sum over objectives of one operator's credits.
double scalarized_credit(const CreditView& credits, const WeightVector& weights, std::size_t op);

/// Picks the next operator.
///
/// random: uniform. pm, ap: sample the probability vector. ucb: an unpulled
/// operator first, else argmax of q_i + c * sqrt(2 ln N / n_i). rl: with
/// probability epsilon a uniform pick, otherwise argmax of the weighted credit
/// sum. Argmax ties are broken uniformly at random. `credits` is only read by
/// rl and must then be pool_size x weights.size(); DimensionError otherwise.
OperatorId select_operator(const SchemeState& state, const CreditView& credits, const WeightVector& weights,
                           Rng& rng);

/// Feeds the scalar reward of the last move back to the scheme. rl keeps its
/// state in the credit model and ignores this call. Throws std::out_of_range
/// for an invalid operator.
void update_scheme(SchemeState& state, OperatorId op, double scalar_reward);

}  // namespace aos
