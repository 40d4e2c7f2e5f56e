#include "aos/abc.hpp"

#include <algorithm>
#include <string>

#include "aos/error.hpp"
#include "aos/rng.hpp"

namespace aos {

void AbcConfig::validate(const SukpInstance& instance) const {
    if (colony_size < 2) {
        throw ConfigError("colony_size must be at least 2");
    }
    if (budget < colony_size) {
        throw ConfigError("budget must be at least colony_size");
    }
    if (!weights.empty() && weights.size() != instance.objective_count()) {
        throw DimensionError("run has " + std::to_string(weights.size()) + " weights, instance has " +
                             std::to_string(instance.objective_count()) + " objectives");
    }
    weight_vector(instance.objective_count());
    SchemeState(scheme, operators.size(), scheme_params);
    CreditModel(operators.size(), instance.objective_count(), instance.item_count(), credit_params);
    if (archive_capacity && *archive_capacity == 0) {
        throw ConfigError("archive capacity must be positive");
    }
}

WeightVector AbcConfig::weight_vector(std::size_t objectives) const {
    return weights.empty() ? WeightVector::uniform(objectives) : WeightVector(weights);
}

std::vector<double> scalarization_weights(const SukpInstance& instance, const WeightVector& weights) {
    if (weights.size() != instance.objective_count()) {
        throw DimensionError("scalarization_weights: weight count differs from objective count");
    }
    std::vector<double> omega(weights.size());
    for (std::size_t j = 0; j < omega.size(); ++j) {
        const double total = instance.total_profit(j);
        omega[j] = weights[j] / (total > 0.0 ? total : 1.0);
    }
    return omega;
}

std::optional<std::size_t> evals_to_target(std::span<const HistoryPoint> history, double target) {
    for (const auto& point : history) {
        if (point.best_fitness >= target) {
            return point.evaluations;
        }
    }
    return std::nullopt;
}

namespace {

class Colony {
public:
    Colony(const SukpInstance& instance, const AbcConfig& config, CreditModel model, const RunOptions& options)
        : instance_(instance),
          config_(config),
          options_(options),
          rng_(config.seed),
          weights_(config.weight_vector(instance.objective_count())),
          omega_(scalarization_weights(instance, weights_)),
          scheme_(config.scheme, config.operators.size(), config.scheme_params),
          model_(std::move(model)),
          archive_(config.archive_capacity),
          usage_(config.operators.size(), 0),
          no_credits_(0, 0) {}

    RunResult execute() {
        initialize();
        std::size_t cycle = 0;
        while (evaluations_ < config_.budget) {
            employed_phase();
            onlooker_phase();
            const std::size_t scouts = scout_phase();
            ++cycle;
            if (options_.on_cycle) {
                options_.on_cycle(CycleSnapshot{cycle, evaluations_, scouts, sources_});
            }
        }
        RunResult result{best_.solution,
                         best_.evaluation,
                         best_.fitness,
                         std::move(archive_),
                         std::move(history_),
                         evaluations_,
                         std::nullopt,
                         std::move(model_),
                         std::move(usage_),
                         scouts_total_};
        if (options_.target) {
            result.evals_to_target = evals_to_target(result.history, *options_.target);
        }
        return result;
    }

private:
    bool budget_left() const { return evaluations_ < config_.budget; }

    Evaluation evaluate_counted(const BitSolution& x) {
        ++evaluations_;
        Evaluation ev = evaluate(instance_, x);
        archive_.insert(x, ev.objectives);
        return ev;
    }

    double fitness_of(const Evaluation& ev) const { return weighted_sum(ev.objectives, omega_); }

    FoodSource random_source() {
        BitSolution x(instance_.item_count());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x.set(i, rng_.bernoulli(0.5));
        }
        x = repair(instance_, std::move(x), omega_);
        Evaluation ev = evaluate_counted(x);
        const double f = fitness_of(ev);
        return FoodSource{std::move(x), std::move(ev), f, 0};
    }

    void consider_best(const FoodSource& source) {
        if (source.fitness > best_.fitness) {
            best_ = source;
            best_.trials = 0;
            history_.push_back({evaluations_, best_.fitness});
        }
    }

    void initialize() {
        sources_.reserve(config_.colony_size);
        for (std::size_t s = 0; s < config_.colony_size; ++s) {
            sources_.push_back(random_source());
        }
        best_ = sources_.front();
        for (const auto& source : sources_) {
            if (source.fitness > best_.fitness) {
                best_ = source;
            }
        }
        best_.trials = 0;
        history_.push_back({evaluations_, best_.fitness});
    }

    void move(std::size_t s) {
        std::size_t donor = rng_.uniform_index(sources_.size() - 1);
        if (donor >= s) {
            ++donor;
        }
        FoodSource& source = sources_[s];
        const bool learning = config_.scheme == SchemeKind::rl;

        const OperatorId op = select_operator(
            scheme_, learning ? effective_credit_of(model_, source.solution) : no_credits_, weights_, rng_);
        ++usage_[op.value];

        BitSolution candidate = apply_operator(
            config_.operators, op, MoveContext{source.solution, best_.solution, sources_[donor].solution}, rng_);
        candidate = repair(instance_, std::move(candidate), omega_);
        Evaluation ev = evaluate_counted(candidate);

        const RewardVector reward = compute_reward(source.evaluation, ev);
        if (learning) {
            model_.update_on_success(candidate, op, reward);
        }
        update_scheme(scheme_, op, weighted_sum(reward, weights_.values()));

        const double f = fitness_of(ev);
        if (f > source.fitness) {
            source = FoodSource{std::move(candidate), std::move(ev), f, 0};
            consider_best(source);
        } else {
            source.trials = std::min(source.trials + 1, config_.limit + 1);
        }
    }

    void employed_phase() {
        for (std::size_t s = 0; s < sources_.size() && budget_left(); ++s) {
            move(s);
        }
    }

    std::size_t roulette() {
        double total = 0.0;
        for (const auto& source : sources_) {
            total += std::max(source.fitness, 0.0);
        }
        if (!(total > 0.0)) {
            return rng_.uniform_index(sources_.size());
        }
        const double u = rng_.uniform01() * total;
        double acc = 0.0;
        for (std::size_t s = 0; s < sources_.size(); ++s) {
            acc += std::max(sources_[s].fitness, 0.0);
            if (u < acc) {
                return s;
            }
        }
        return sources_.size() - 1;
    }

    void onlooker_phase() {
        for (std::size_t t = 0; t < sources_.size() && budget_left(); ++t) {
            move(roulette());
        }
    }

    std::size_t scout_phase() {
        std::size_t scouts = 0;
        for (auto& source : sources_) {
            if (source.trials > config_.limit && budget_left()) {
                source = random_source();
                consider_best(source);
                ++scouts;
            }
        }
        scouts_total_ += scouts;
        return scouts;
    }

    const SukpInstance& instance_;
    const AbcConfig& config_;
    const RunOptions& options_;
    Rng rng_;
    WeightVector weights_;
    std::vector<double> omega_;
    SchemeState scheme_;
    CreditModel model_;
    ParetoArchive archive_;
    std::vector<std::uint64_t> usage_;
    CreditView no_credits_;
    std::vector<FoodSource> sources_;
    FoodSource best_;
    std::vector<HistoryPoint> history_;
    std::size_t evaluations_ = 0;
    std::size_t scouts_total_ = 0;
};

}  // namespace

RunResult run(const SukpInstance& instance, const AbcConfig& config, std::optional<CreditModel> initial_model,
              const RunOptions& options) {
    config.validate(instance);
    const ModelShape shape{config.operators.size(), instance.objective_count(), instance.item_count()};
    if (initial_model) {
        if (initial_model->operator_count() != shape.operators ||
            initial_model->objective_count() != shape.objectives ||
            initial_model->solution_length() != shape.solution_length) {
            throw DimensionError("credit model shape (" + std::to_string(initial_model->operator_count()) + ", " +
                                 std::to_string(initial_model->objective_count()) + ", " +
                                 std::to_string(initial_model->solution_length()) +
                                 ") does not match the run (" + std::to_string(shape.operators) + ", " +
                                 std::to_string(shape.objectives) + ", " + std::to_string(shape.solution_length) +
                                 ")");
        }
    }
    CreditModel model = initial_model ? std::move(*initial_model)
                                      : CreditModel(shape.operators, shape.objectives, shape.solution_length,
                                                    config.credit_params);
    return Colony(instance, config, std::move(model), options).execute();
}

std::vector<RunResult> run_transfer_sequence(const SukpInstance& instance, const AbcConfig& config,
                                             TransferMode mode, std::span<const std::uint64_t> seeds,
                                             std::optional<CreditModel> experience, const RunOptions& options) {
    if (seeds.empty()) {
        throw ConfigError("run_transfer_sequence needs at least one repetition");
    }
    if (mode == TransferMode::frozen && !experience) {
        throw ConfigError("frozen transfer mode needs a loaded experience");
    }
    if (mode == TransferMode::frozen) {
        experience->set_frozen(true);
    } else if (mode == TransferMode::continue_learning && experience) {
        experience->set_frozen(false);
    }
    std::vector<RunResult> results;
    results.reserve(seeds.size());
    std::optional<CreditModel> carried = mode == TransferMode::continue_learning ? experience : std::nullopt;
    for (std::uint64_t seed : seeds) {
        AbcConfig rep = config;
        rep.seed = seed;
        switch (mode) {
        case TransferMode::fresh:
            results.push_back(run(instance, rep, std::nullopt, options));
            break;
        case TransferMode::frozen:
            results.push_back(run(instance, rep, experience, options));
            break;
        case TransferMode::continue_learning:
            results.push_back(run(instance, rep, carried, options));
            carried = results.back().model;
            break;
        }
    }
    return results;
}

std::vector<RunResult> run_transfer_sequence(const SukpInstance& instance, const AbcConfig& config,
                                             TransferMode mode, std::size_t repetitions,
                                             std::optional<CreditModel> experience, const RunOptions& options) {
    std::vector<std::uint64_t> seeds(repetitions);
    for (std::size_t k = 0; k < repetitions; ++k) {
        seeds[k] = derive_seed(config.seed, k);
    }
    return run_transfer_sequence(instance, config, mode, seeds, std::move(experience), options);
}

}  // namespace aos
