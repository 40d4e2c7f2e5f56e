#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "aos/operators.hpp"
#include "aos/problem.hpp"

namespace aos {

/// One reward per objective.
using RewardVector = std::vector<double>;

/// r_j = max(0, (f_j(next) - f_j(prev)) / (|f_j(prev)| + 1)).
/// Throws DimensionError on objective-count mismatch.
RewardVector compute_reward(const Evaluation& prev, const Evaluation& next);

enum class CreditMode {
    similarity,  // 1 / (1 + ||x - c||)
    literal,     // ||x - c||
};

struct CreditParams {
    double beta = 0.1;   // learning rate
    double gamma = 0.9;  // discount
    CreditMode mode = CreditMode::similarity;
    bool use_cluster = true;  // false: cluster factor fixed at 1
    bool use_q = true;        // false: Bellman factor fixed at 1

    friend bool operator==(const CreditParams&, const CreditParams&) = default;
};

/// Dense operators x objectives table of credit values.
class CreditView {
public:
    CreditView(std::size_t operators, std::size_t objectives)
        : operators_(operators), objectives_(objectives), values_(operators * objectives, 0.0) {}

    std::size_t operator_count() const noexcept { return operators_; }
    std::size_t objective_count() const noexcept { return objectives_; }
    double operator()(std::size_t op, std::size_t objective) const { return values_[op * objectives_ + objective]; }
    double& operator()(std::size_t op, std::size_t objective) { return values_[op * objectives_ + objective]; }

private:
    std::size_t operators_;
    std::size_t objectives_;
    std::vector<double> values_;
};

enum class UpdateOutcome { applied, skipped };

/// Per-(operator, objective) credit store.
///
/// Each cell keeps a cluster centre (the running mean of the states in which
/// the operator improved that objective), the number of such successes, and a
/// scalar Bellman value q. The credit used for selection at state x is
///
///     Q_j(x, o_i) = cluster(x, c_ij) * (1 + q_ij)
///
/// where the cluster term is a similarity 1/(1+||x - c_ij||) by default or the
/// raw distance in literal mode. Either factor can be switched off through
/// CreditParams. A frozen model ignores every update.
class CreditModel {
public:
    /// Fresh model: centres at 0.5, counters 0, q 0. Throws ConfigError for
    /// zero dimensions or beta/gamma outside [0, 1].
    CreditModel(std::size_t operators, std::size_t objectives, std::size_t solution_length, CreditParams params = {});

    /// Rebuilds a model from stored state. Throws std::invalid_argument when
    /// the arrays have the wrong size, a centre leaves [0, 1] or a value is
    /// not finite.
    static CreditModel from_state(std::size_t operators, std::size_t objectives, std::size_t solution_length,
                                  CreditParams params, std::vector<double> centers,
                                  std::vector<std::uint64_t> counters, std::vector<double> q_table);

    std::size_t operator_count() const noexcept { return operators_; }
    std::size_t objective_count() const noexcept { return objectives_; }
    std::size_t solution_length() const noexcept { return length_; }
    const CreditParams& params() const noexcept { return params_; }
    double beta() const noexcept { return params_.beta; }
    double gamma() const noexcept { return params_.gamma; }

    bool frozen() const noexcept { return frozen_; }
    void set_frozen(bool frozen) noexcept { frozen_ = frozen; }

    std::span<const double> center(OperatorId op, std::size_t objective) const;
    std::uint64_t counter(OperatorId op, std::size_t objective) const { return counters_[cell(op, objective)]; }
    double q(OperatorId op, std::size_t objective) const { return q_[cell(op, objective)]; }

    // Row-major [operator][objective] storage, centres flattened further by bit.
    std::span<const double> centers() const noexcept { return centers_; }
    std::span<const std::uint64_t> counters() const noexcept { return counters_; }
    std::span<const double> q_table() const noexcept { return q_; }

    /// Cluster term only (similarity or distance per CreditMode).
    double cluster_credit(const BitSolution& x, OperatorId op, std::size_t objective) const;
    /// Cluster term times (1 + q), honouring use_cluster / use_q.
    double effective_credit(const BitSolution& x, OperatorId op, std::size_t objective) const;
    /// max over operators of effective_credit(x, ., objective)
    double best_effective_credit(const BitSolution& x, std::size_t objective) const;

    /// q <- q + beta * (reward + gamma * next_best_q - q) on one cell.
    UpdateOutcome bellman_update(OperatorId op, std::size_t objective, double reward, double next_best_q);

    /// Feedback for one move that produced x_prime with operator `op`.
    /// For every objective with reward > 0 the counter is incremented and the
    /// centre moves to the running mean of its success states. Afterwards the
    /// Bellman update runs for every objective, bootstrapping from the best
    /// effective credit at x_prime.
    UpdateOutcome update_on_success(const BitSolution& x_prime, OperatorId op, std::span<const double> reward);

    friend bool operator==(const CreditModel&, const CreditModel&) = default;

private:
    std::size_t cell(OperatorId op, std::size_t objective) const;
    void check_state(const BitSolution& x) const;

    std::size_t operators_;
    std::size_t objectives_;
    std::size_t length_;
    CreditParams params_;
    bool frozen_ = false;
    std::vector<double> centers_;
    std::vector<std::uint64_t> counters_;
    std::vector<double> q_;
};

CreditView credit_of(const CreditModel& model, const BitSolution& x);
CreditView effective_credit_of(const CreditModel& model, const BitSolution& x);

// ---------------------------------------------------------------------------
// Experience persistence

enum class TransferMode {
    fresh,              // blank model every run
    frozen,             // load experience, never update it
    continue_learning,  // load experience and keep learning
};

std::string_view to_string(TransferMode mode);
/// "fresh", "frozen" or "continue"; throws ConfigError otherwise.
TransferMode parse_transfer_mode(std::string_view text);

inline constexpr int kExperienceVersion = 1;

/// Writes the versioned JSON document through a temporary file and a rename,
/// so readers never observe a partial file. Throws IoError.
void save_experience(const CreditModel& model, const std::filesystem::path& path);

struct ModelShape {
    std::size_t operators;
    std::size_t objectives;
    std::size_t solution_length;
};

/// `fresh` returns a blank model of `shape` without touching the file.
/// `frozen` and `continue_learning` read the file; beta and gamma come from
/// the file, the remaining CreditParams from `params`. Throws IoError when the
/// file cannot be read, ExperienceError(version | dimension | corrupt) when
/// its content is unusable.
CreditModel load_experience(const std::filesystem::path& path, TransferMode mode, const ModelShape& shape,
                            const CreditParams& params = {});

/// Parses an experience document without checking it against a run.
CreditModel parse_experience(std::string_view json_text, const CreditParams& params = {});
std::string format_experience(const CreditModel& model);

}  // namespace aos
