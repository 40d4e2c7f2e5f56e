#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "aos/credit.hpp"
#include "aos/moo.hpp"
#include "aos/operators.hpp"
#include "aos/problem.hpp"
#include "aos/selection.hpp"

namespace aos {

struct AbcConfig {
    std::size_t colony_size = 20;
    std::size_t limit = 50;
    std::size_t budget = 40000;  // evaluations, initialization included
    SchemeKind scheme = SchemeKind::rl;
    SchemeParams scheme_params;
    CreditParams credit_params;
    OperatorPool operators = OperatorPool::default_pool();
    std::vector<double> weights;  // empty: uniform over the objectives
    std::uint64_t seed = 1;
    std::optional<std::size_t> archive_capacity = ParetoArchive::kDefaultCapacity;

    /// Throws ConfigError for invalid settings and DimensionError when the
    /// weights do not match the instance.
    void validate(const SukpInstance& instance) const;
    WeightVector weight_vector(std::size_t objectives) const;
};

struct FoodSource {
    BitSolution solution;
    Evaluation evaluation;
    double fitness = 0.0;
    std::size_t trials = 0;
};

struct HistoryPoint {
    std::size_t evaluations = 0;
    double best_fitness = 0.0;

    friend bool operator==(const HistoryPoint&, const HistoryPoint&) = default;
};

struct CycleSnapshot {
    std::size_t cycle = 0;
    std::size_t evaluations = 0;
    std::size_t scouts = 0;  // sources reinitialized in this cycle
    std::span<const FoodSource> sources;
};

struct RunOptions {
    std::optional<double> target;
    /// Called after the scout phase of every completed cycle.
    std::function<void(const CycleSnapshot&)> on_cycle;
};

struct RunResult {
    BitSolution best_solution;
    Evaluation best_evaluation;
    double best_fitness = 0.0;
    ParetoArchive archive;
    std::vector<HistoryPoint> history;  // initial best, then every improvement
    std::size_t evaluations = 0;
    std::optional<std::size_t> evals_to_target;
    CreditModel model;  // final credit model (untouched for non-rl schemes)
    std::vector<std::uint64_t> operator_usage;
    std::size_t scouts = 0;
};

/// Per-objective scalarization weights w_j / T_j, where T_j is the total
/// profit of objective j (1 when that total is 0). Fitness is the weighted sum
/// of raw objectives with these weights, which keeps objectives of different
/// scale comparable while preserving the ordering of every single objective.
std::vector<double> scalarization_weights(const SukpInstance& instance, const WeightVector& weights);

/// First evaluation count at which the history reaches `target`.
std::optional<std::size_t> evals_to_target(std::span<const HistoryPoint> history, double target);

/// One seeded ABC run with adaptive operator selection.
///
/// Every move selects an operator for the source's state, applies it, repairs
/// and evaluates the candidate, turns the objective change into a reward,
/// feeds the reward to the credit model (rl) or scheme state (others), and
/// replaces the source when the scalarized fitness improves. Employed,
/// onlooker and scout phases repeat until the evaluation budget is spent.
/// `initial_model` seeds the credit model; it must match the pool size, the
/// objective count and the item count (DimensionError otherwise).
RunResult run(const SukpInstance& instance, const AbcConfig& config,
              std::optional<CreditModel> initial_model = std::nullopt, const RunOptions& options = {});

/// Repeated runs sharing experience according to `mode`:
/// fresh starts each run from a blank model; frozen reuses `experience`
/// read-only in every run (ConfigError when absent); continue_learning starts
/// from `experience` (or a blank model) and carries each run's final model
/// into the next. Run k uses seeds[k].
std::vector<RunResult> run_transfer_sequence(const SukpInstance& instance, const AbcConfig& config,
                                             TransferMode mode, std::span<const std::uint64_t> seeds,
                                             std::optional<CreditModel> experience = std::nullopt,
                                             const RunOptions& options = {});

/// Seeds derived from config.seed: derive_seed(config.seed, k).
std::vector<RunResult> run_transfer_sequence(const SukpInstance& instance, const AbcConfig& config,
                                             TransferMode mode, std::size_t repetitions,
                                             std::optional<CreditModel> experience = std::nullopt,
                                             const RunOptions& options = {});

}  // namespace aos
