#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aos/abc.hpp"
#include "aos/config.hpp"
#include "aos/credit.hpp"
#include "aos/error.hpp"
#include "aos/problem.hpp"
#include "aos/selection.hpp"

namespace aos {

/// A scheme together with its transfer mode. Non-fresh modes apply to rl only.
struct Variant {
    SchemeKind scheme = SchemeKind::rl;
    TransferMode mode = TransferMode::fresh;

    /// "rl", "pm", ... for fresh runs, "rl:frozen" / "rl:continue" otherwise.
    std::string label() const;
    /// Inverse of label(); ConfigError for unknown text.
    static Variant parse(std::string_view text);

    friend auto operator<=>(const Variant&, const Variant&) = default;
};

struct RunRecord {
    std::string instance;
    std::string scheme;
    TransferMode mode = TransferMode::fresh;
    std::uint64_t seed = 0;
    double best_fitness = 0.0;
    std::optional<std::size_t> evals_to_target;
    double wall_time_s = 0.0;

    std::string variant() const;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

enum class RankKey { fitness, evals_to_target };

struct RankTable {
    std::vector<std::string> instances;  // first-appearance order
    std::vector<std::string> variants;   // first-appearance order
    std::map<std::pair<std::string, std::string>, double> mean_rank;  // (instance, variant)
    std::map<std::string, double> grand_mean_rank;                     // variant

    double mean(const std::string& instance, const std::string& variant) const;
    double grand(const std::string& variant) const;

    friend bool operator==(const RankTable&, const RankTable&) = default;
};

/// Raised by rank_table; lists every (instance, seed) cell lacking a variant or
/// holding one twice.
class IncompleteCellsError : public Error {
public:
    explicit IncompleteCellsError(std::vector<std::string> cells);
    const std::vector<std::string>& cells() const noexcept { return cells_; }

private:
    std::vector<std::string> cells_;
};

/// Ranks variants within each (instance, seed) cell, 1 = best. Fitness ranks
/// higher values first; evals_to_target ranks fewer evaluations first and puts
/// runs that never reached the target last. Ties share average ranks.
/// `expected_variants` lists variants every cell must hold even when no record
/// carries them; they come first in RankTable::variants.
RankTable rank_table(std::span<const RunRecord> records, RankKey key = RankKey::fitness,
                     std::span<const std::string> expected_variants = {});

struct NamedInstance {
    std::string id;
    std::string group;
    std::shared_ptr<const SukpInstance> instance;
};

struct MatrixSpec {
    std::vector<NamedInstance> instances;
    std::vector<Variant> variants;
    std::vector<std::uint64_t> seeds;
    AbcConfig base;  // seed and scheme are overridden per run
    double target_ratio = 0.99;
    std::size_t parallel = 1;
    bool record_wall_time = true;
    /// Experience for frozen/continue variants. Without a file, each instance
    /// gets a fresh rl pretraining run with `pretrain_seed`.
    std::optional<std::filesystem::path> experience;
    std::uint64_t pretrain_seed = 0x5eed;
    std::optional<std::size_t> pretrain_budget;  // defaults to base.budget
};

struct RunFailure {
    std::string instance;
    std::string variant;
    std::optional<std::uint64_t> seed;
    std::string message;
};

struct MatrixResult {
    std::vector<RunRecord> records;  // ordered by (instance, variant, seed) as listed in the spec
    std::vector<RunFailure> failures;
    std::map<std::string, double> targets;  // per instance
};

/// Runs every (instance, variant, seed) triple. Fresh runs are independent;
/// frozen and continue variants run their seeds in order as one transfer
/// sequence. Failures are collected, not thrown. Output does not depend on
/// `parallel`.
MatrixResult run_matrix(const MatrixSpec& spec);

/// Builds a matrix from configuration keys; instance files are loaded
/// immediately so missing inputs fail before any run. Relative paths resolve
/// against `base_dir`.
MatrixSpec matrix_spec_from(const KeyValueConfig& config, const std::filesystem::path& base_dir = {});

/// Keys recognised by matrix_spec_from in addition to the run settings.
const std::vector<std::string_view>& matrix_setting_keys();

void write_records_csv(std::span<const RunRecord> records, std::ostream& out);
/// Throws ParseError for malformed rows.
std::vector<RunRecord> parse_records_csv(std::string_view text);
void write_ranks_csv(const RankTable& table, std::ostream& out);
/// Mean rank per (group, variant): instance means averaged within a group.
/// Instances absent from `groups` form their own group.
void write_plot_data(const RankTable& table, const std::map<std::string, std::string>& groups, std::ostream& out);

struct OutputPaths {
    std::filesystem::path records;
    std::filesystem::path ranks;
    std::filesystem::path plot_data;
};

/// IoError when a file cannot be written.
void emit_results(std::span<const RunRecord> records, const RankTable& table,
                  const std::map<std::string, std::string>& groups, const OutputPaths& paths);

}  // namespace aos
