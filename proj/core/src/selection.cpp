#include "aos/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "aos/error.hpp"

namespace aos {

std::string_view to_string(SchemeKind kind) {
    switch (kind) {
    case SchemeKind::random: return "random";
    case SchemeKind::pm: return "pm";
    case SchemeKind::ap: return "ap";
    case SchemeKind::ucb: return "ucb";
    case SchemeKind::rl: return "rl";
    }
    return "random";
}

SchemeKind parse_scheme(std::string_view text) {
    for (auto kind : {SchemeKind::random, SchemeKind::pm, SchemeKind::ap, SchemeKind::ucb, SchemeKind::rl}) {
        if (text == to_string(kind)) {
            return kind;
        }
    }
    throw ConfigError("unknown scheme '" + std::string(text) + "' (valid: random, pm, ap, ucb, rl)");
}

// ---------------------------------------------------------------------------

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw ConfigError("weight vector must not be empty");
    }
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0 && w <= 1.0)) {
            throw ConfigError("weights must lie in [0, 1]");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("weights must sum to 1");
    }
}

WeightVector WeightVector::uniform(std::size_t objectives) {
    if (objectives == 0) {
        throw ConfigError("weight vector must not be empty");
    }
    std::vector<double> w(objectives, 1.0 / static_cast<double>(objectives));
    // Absorb rounding so the sum check is exact for any count.
    w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    return WeightVector(std::move(w));
}

WeightVector WeightVector::unit(std::size_t objectives, std::size_t j) {
    if (j >= objectives) {
        throw ConfigError("unit weight index outside the objective range");
    }
    std::vector<double> w(objectives, 0.0);
    w[j] = 1.0;
    return WeightVector(std::move(w));
}

// ---------------------------------------------------------------------------

SchemeState::SchemeState(SchemeKind kind, std::size_t pool_size, SchemeParams params)
    : kind_(kind), params_(params), quality_(pool_size, 0.0), pulls_(pool_size, 0) {
    if (pool_size == 0) {
        throw ConfigError("selection scheme needs a non-empty operator pool");
    }
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!unit(params_.p_min) || !unit(params_.alpha) || !unit(params_.pursuit_rate) || !unit(params_.epsilon)) {
        throw ConfigError("p_min, alpha, pursuit_rate and epsilon must lie in [0, 1]");
    }
    if (!(params_.ucb_c > 0.0) || !std::isfinite(params_.ucb_c)) {
        throw ConfigError("ucb_c must be positive");
    }
    if ((kind_ == SchemeKind::pm || kind_ == SchemeKind::ap) &&
        static_cast<double>(pool_size) * params_.p_min > 1.0) {
        throw ConfigError("pool_size * p_min exceeds 1");
    }
    probabilities_.assign(pool_size, 1.0 / static_cast<double>(pool_size));
}

double scalarized_credit(const CreditView& credits, const WeightVector& weights, std::size_t op) {
    double total = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        total += weights[j] * credits(op, j);
    }
    return total;
}

namespace {

// Uniform choice among exact maxima.
template <typename Score>
OperatorId argmax_random_ties(std::size_t n, Score score, Rng& rng) {
    std::vector<std::size_t> best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double v = score(i);
        if (v > best_value) {
            best_value = v;
            best.assign(1, i);
        } else if (v == best_value) {
            best.push_back(i);
        }
    }
    if (best.empty()) {
        // Every score was NaN or -inf.
        return OperatorId{rng.uniform_index(n)};
    }
    return OperatorId{best.size() == 1 ? best.front() : best[rng.uniform_index(best.size())]};
}

OperatorId sample(std::span<const double> p, Rng& rng) {
    const double u = rng.uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) {
            return OperatorId{i};
        }
    }
    return OperatorId{p.size() - 1};
}

}  // namespace

OperatorId select_operator(const SchemeState& state, const CreditView& credits, const WeightVector& weights,
                           Rng& rng) {
    const std::size_t k = state.pool_size();
    switch (state.kind_) {
    case SchemeKind::random:
        return OperatorId{rng.uniform_index(k)};
    case SchemeKind::pm:
    case SchemeKind::ap:
        return sample(state.probabilities_, rng);
    case SchemeKind::ucb: {
        std::vector<std::size_t> unpulled;
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < k; ++i) {
            total += state.pulls_[i];
            if (state.pulls_[i] == 0) {
                unpulled.push_back(i);
            }
        }
        if (!unpulled.empty()) {
            return OperatorId{unpulled[rng.uniform_index(unpulled.size())]};
        }
        const double log_total = std::log(static_cast<double>(total));
        return argmax_random_ties(
            k,
            [&](std::size_t i) {
                return state.quality_[i] +
                       state.params_.ucb_c * std::sqrt(2.0 * log_total / static_cast<double>(state.pulls_[i]));
            },
            rng);
    }
    case SchemeKind::rl: {
        if (credits.operator_count() != k || credits.objective_count() != weights.size()) {
            throw DimensionError("select_operator: credit view is " + std::to_string(credits.operator_count()) +
                                 "x" + std::to_string(credits.objective_count()) + ", expected " +
                                 std::to_string(k) + "x" + std::to_string(weights.size()));
        }
        if (rng.uniform01() < state.params_.epsilon) {
            return OperatorId{rng.uniform_index(k)};
        }
        return argmax_random_ties(k, [&](std::size_t i) { return scalarized_credit(credits, weights, i); }, rng);
    }
    }
    return OperatorId{0};
}

void update_scheme(SchemeState& state, OperatorId op, double scalar_reward) {
    const std::size_t k = state.pool_size();
    if (op.value >= k) {
        throw std::out_of_range("update_scheme: operator " + std::to_string(op.value) + " outside pool of size " +
                                std::to_string(k));
    }
    if (state.kind_ == SchemeKind::rl) {
        return;
    }
    ++state.pulls_[op.value];
    const double alpha = state.params_.alpha;
    state.quality_[op.value] = (1.0 - alpha) * state.quality_[op.value] + alpha * scalar_reward;

    const double p_min = state.params_.p_min;
    switch (state.kind_) {
    case SchemeKind::pm: {
        const double total = std::accumulate(state.quality_.begin(), state.quality_.end(), 0.0);
        if (total > 0.0) {
            const double spread = 1.0 - static_cast<double>(k) * p_min;
            for (std::size_t i = 0; i < k; ++i) {
                state.probabilities_[i] = p_min + spread * state.quality_[i] / total;
            }
        } else {
            std::fill(state.probabilities_.begin(), state.probabilities_.end(), 1.0 / static_cast<double>(k));
        }
        break;
    }
    case SchemeKind::ap: {
        const auto best = static_cast<std::size_t>(
            std::distance(state.quality_.begin(), std::max_element(state.quality_.begin(), state.quality_.end())));
        const double p_max = 1.0 - static_cast<double>(k - 1) * p_min;
        const double rate = state.params_.pursuit_rate;
        for (std::size_t i = 0; i < k; ++i) {
            const double target = i == best ? p_max : p_min;
            state.probabilities_[i] += rate * (target - state.probabilities_[i]);
        }
        break;
    }
    case SchemeKind::ucb:
    case SchemeKind::random:
    case SchemeKind::rl:
        break;
    }
}

}  // namespace aos
