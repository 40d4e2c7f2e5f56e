#include "aos/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "aos/format.hpp"
#include "aos/rng.hpp"
#include "aos/stats.hpp"

namespace aos {

std::string Variant::label() const {
    std::string text(to_string(scheme));
    if (mode != TransferMode::fresh) {
        text += ':';
        text += to_string(mode);
    }
    return text;
}

Variant Variant::parse(std::string_view text) {
    Variant v;
    const auto colon = text.find(':');
    v.scheme = parse_scheme(text.substr(0, colon));
    if (colon != std::string_view::npos) {
        v.mode = parse_transfer_mode(text.substr(colon + 1));
    }
    if (v.mode != TransferMode::fresh && v.scheme != SchemeKind::rl) {
        throw ConfigError("transfer modes apply to the rl scheme only: '" + std::string(text) + "'");
    }
    return v;
}

std::string RunRecord::variant() const { return Variant{parse_scheme(scheme), mode}.label(); }

double RankTable::mean(const std::string& instance, const std::string& variant) const {
    return mean_rank.at({instance, variant});
}

double RankTable::grand(const std::string& variant) const { return grand_mean_rank.at(variant); }

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        out += out.empty() ? "" : "; ";
        out += p;
    }
    return out;
}

}  // namespace

IncompleteCellsError::IncompleteCellsError(std::vector<std::string> cells)
    : Error("incomplete rank cells: " + join(cells)), cells_(std::move(cells)) {}

RankTable rank_table(std::span<const RunRecord> records, RankKey key,
                     std::span<const std::string> expected_variants) {
    RankTable table;
    auto remember = [](std::vector<std::string>& list, const std::string& value) {
        if (std::find(list.begin(), list.end(), value) == list.end()) {
            list.push_back(value);
        }
    };
    for (const auto& v : expected_variants) {
        remember(table.variants, v);
    }
    // cell (instance, seed) -> variant -> score (higher is better)
    std::map<std::pair<std::string, std::uint64_t>, std::map<std::string, std::vector<double>>> cells;
    for (const auto& r : records) {
        const std::string variant = r.variant();
        remember(table.instances, r.instance);
        remember(table.variants, variant);
        double score = 0.0;
        if (key == RankKey::fitness) {
            score = r.best_fitness;
        } else {
            score = r.evals_to_target ? -static_cast<double>(*r.evals_to_target)
                                      : -std::numeric_limits<double>::infinity();
        }
        cells[{r.instance, r.seed}][variant].push_back(score);
    }

    std::vector<std::string> problems;
    for (const auto& [cell, by_variant] : cells) {
        for (const auto& v : table.variants) {
            const auto it = by_variant.find(v);
            const std::size_t count = it == by_variant.end() ? 0 : it->second.size();
            if (count != 1) {
                problems.push_back("instance=" + cell.first + " seed=" + std::to_string(cell.second) +
                                   " variant=" + v + (count == 0 ? " missing" : " duplicated"));
            }
        }
    }
    if (!problems.empty()) {
        throw IncompleteCellsError(std::move(problems));
    }

    std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> sums;
    for (const auto& [cell, by_variant] : cells) {
        std::vector<double> negated;
        for (const auto& v : table.variants) {
            negated.push_back(-by_variant.at(v).front());
        }
        const std::vector<double> ranks = average_ranks(negated);
        for (std::size_t i = 0; i < table.variants.size(); ++i) {
            auto& acc = sums[{cell.first, table.variants[i]}];
            acc.first += ranks[i];
            ++acc.second;
        }
    }
    for (const auto& [k, acc] : sums) {
        table.mean_rank[k] = acc.first / static_cast<double>(acc.second);
    }
    for (const auto& v : table.variants) {
        double total = 0.0;
        for (const auto& inst : table.instances) {
            total += table.mean_rank.at({inst, v});
        }
        table.grand_mean_rank[v] = table.instances.empty() ? 0.0 : total / static_cast<double>(table.instances.size());
    }
    return table;
}

// ---------------------------------------------------------------------------

namespace {

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                body(i);
            }
        });
    }
}

struct Task {
    std::size_t instance;
    std::size_t variant;
    std::optional<std::size_t> seed;  // nullopt: the whole transfer sequence
};

struct Slot {
    std::optional<RunRecord> record;
    std::vector<HistoryPoint> history;
    std::optional<RunFailure> failure;
};

}  // namespace

MatrixResult run_matrix(const MatrixSpec& spec) {
    if (spec.instances.empty() || spec.variants.empty() || spec.seeds.empty()) {
        throw ConfigError("run_matrix needs at least one instance, variant and seed");
    }
    if (!(spec.target_ratio > 0.0 && spec.target_ratio <= 1.0)) {
        throw ConfigError("target_ratio must lie in (0, 1]");
    }
    for (const auto& v : spec.variants) {
        if (v.mode != TransferMode::fresh && v.scheme != SchemeKind::rl) {
            throw ConfigError("transfer modes apply to the rl scheme only: " + v.label());
        }
    }
    const bool needs_experience = std::any_of(spec.variants.begin(), spec.variants.end(),
                                              [](const Variant& v) { return v.mode != TransferMode::fresh; });

    const std::size_t n_inst = spec.instances.size();
    const std::size_t n_var = spec.variants.size();
    const std::size_t n_seed = spec.seeds.size();

    // Experience per instance.
    std::vector<std::optional<CreditModel>> experience(n_inst);
    std::vector<std::string> experience_error(n_inst);
    if (needs_experience) {
        parallel_for(n_inst, spec.parallel, [&](std::size_t i) {
            const SukpInstance& inst = *spec.instances[i].instance;
            try {
                if (spec.experience) {
                    const ModelShape shape{spec.base.operators.size(), inst.objective_count(), inst.item_count()};
                    experience[i] = load_experience(*spec.experience, TransferMode::continue_learning, shape,
                                                    spec.base.credit_params);
                } else {
                    AbcConfig pre = spec.base;
                    pre.scheme = SchemeKind::rl;
                    pre.seed = spec.pretrain_seed;
                    pre.budget = spec.pretrain_budget.value_or(spec.base.budget);
                    experience[i] = run(inst, pre).model;
                }
            } catch (const std::exception& e) {
                experience_error[i] = std::string("experience: ") + e.what();
            }
        });
    }

    std::vector<Task> tasks;
    for (std::size_t i = 0; i < n_inst; ++i) {
        for (std::size_t v = 0; v < n_var; ++v) {
            if (spec.variants[v].mode == TransferMode::fresh) {
                for (std::size_t s = 0; s < n_seed; ++s) {
                    tasks.push_back({i, v, s});
                }
            } else {
                tasks.push_back({i, v, std::nullopt});
            }
        }
    }

    std::vector<Slot> slots(n_inst * n_var * n_seed);
    auto slot_of = [&](std::size_t i, std::size_t v, std::size_t s) -> Slot& {
        return slots[(i * n_var + v) * n_seed + s];
    };
    auto make_record = [&](const NamedInstance& inst, const Variant& v, std::uint64_t seed, const RunResult& r,
                           double seconds) {
        return RunRecord{inst.id, std::string(to_string(v.scheme)), v.mode, seed, r.best_fitness, std::nullopt,
                         spec.record_wall_time ? seconds : 0.0};
    };
    using clock = std::chrono::steady_clock;

    parallel_for(tasks.size(), spec.parallel, [&](std::size_t t) {
        const Task& task = tasks[t];
        const NamedInstance& inst = spec.instances[task.instance];
        const Variant& variant = spec.variants[task.variant];
        AbcConfig config = spec.base;
        config.scheme = variant.scheme;

        if (task.seed) {
            Slot& slot = slot_of(task.instance, task.variant, *task.seed);
            const std::uint64_t seed = spec.seeds[*task.seed];
            try {
                config.seed = seed;
                const auto start = clock::now();
                RunResult r = run(*inst.instance, config);
                const double seconds = std::chrono::duration<double>(clock::now() - start).count();
                slot.record = make_record(inst, variant, seed, r, seconds);
                slot.history = std::move(r.history);
            } catch (const std::exception& e) {
                slot.failure = RunFailure{inst.id, variant.label(), seed, e.what()};
            }
            return;
        }

        if (!experience[task.instance]) {
            for (std::size_t s = 0; s < n_seed; ++s) {
                slot_of(task.instance, task.variant, s).failure =
                    RunFailure{inst.id, variant.label(), spec.seeds[s], experience_error[task.instance]};
            }
            return;
        }
        CreditModel model = *experience[task.instance];
        model.set_frozen(variant.mode == TransferMode::frozen);
        for (std::size_t s = 0; s < n_seed; ++s) {
            Slot& slot = slot_of(task.instance, task.variant, s);
            const std::uint64_t seed = spec.seeds[s];
            try {
                config.seed = seed;
                const auto start = clock::now();
                RunResult r = run(*inst.instance, config, model);
                const double seconds = std::chrono::duration<double>(clock::now() - start).count();
                slot.record = make_record(inst, variant, seed, r, seconds);
                slot.history = std::move(r.history);
                if (variant.mode == TransferMode::continue_learning) {
                    model = std::move(r.model);
                }
            } catch (const std::exception& e) {
                slot.failure = RunFailure{inst.id, variant.label(), seed, e.what()};
            }
        }
    });

    MatrixResult result;
    for (std::size_t i = 0; i < n_inst; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = i * n_var * n_seed; k < (i + 1) * n_var * n_seed; ++k) {
            if (slots[k].record) {
                best = std::max(best, slots[k].record->best_fitness);
            }
        }
        if (std::isfinite(best)) {
            // A discounted target only makes sense for positive fitness.
            const double target = best > 0.0 ? spec.target_ratio * best : best;
            result.targets[spec.instances[i].id] = target;
            for (std::size_t k = i * n_var * n_seed; k < (i + 1) * n_var * n_seed; ++k) {
                if (slots[k].record) {
                    slots[k].record->evals_to_target = evals_to_target(slots[k].history, target);
                }
            }
        }
    }
    for (auto& slot : slots) {
        if (slot.record) {
            result.records.push_back(std::move(*slot.record));
        }
        if (slot.failure) {
            result.failures.push_back(std::move(*slot.failure));
        }
    }
    return result;
}

// ---------------------------------------------------------------------------

const std::vector<std::string_view>& matrix_setting_keys() {
    static const std::vector<std::string_view> keys = {
        "instances",          "variants",          "seeds",           "seed_count",
        "base_seed",          "target_ratio",      "parallel",        "experience",
        "pretrain_seed",      "pretrain_budget",   "generate_count",  "generate_items",
        "generate_elements",  "generate_objectives", "generate_density", "generate_capacity_ratio",
        "generate_seed",      "records",           "ranks",           "plot_data",
        "rank_key",           "no_timing",
    };
    return keys;
}

namespace {

std::string zero_padded(std::size_t value, std::size_t width) {
    std::string s = std::to_string(value);
    return s.size() >= width ? s : std::string(width - s.size(), '0') + s;
}

}  // namespace

MatrixSpec matrix_spec_from(const KeyValueConfig& config, const std::filesystem::path& base_dir) {
    const auto& extra = matrix_setting_keys();
    const RunSettings run = run_settings_from(config, {}, base_dir, extra);

    MatrixSpec spec;
    spec.base = run.abc;
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    };

    if (config.contains("instances")) {
        std::set<std::string> ids;
        for (const auto& p : config.strings("instances")) {
            const std::filesystem::path path = resolve(p);
            auto inst = std::make_shared<const SukpInstance>(load_instance(path));
            std::string id = path.stem().string();
            if (!ids.insert(id).second) {
                throw ConfigError("duplicate instance id '" + id + "'");
            }
            spec.instances.push_back({id, "m" + std::to_string(inst->item_count()), std::move(inst)});
        }
    }
    if (config.contains("generate_count")) {
        GeneratorParams params;
        if (config.contains("generate_items")) params.items = config.unsigned_integer("generate_items");
        if (config.contains("generate_elements")) params.elements = config.unsigned_integer("generate_elements");
        if (config.contains("generate_objectives")) params.objectives = config.unsigned_integer("generate_objectives");
        if (config.contains("generate_density")) params.density = config.number("generate_density");
        if (config.contains("generate_capacity_ratio")) params.capacity_ratio = config.number("generate_capacity_ratio");
        const std::uint64_t gen_seed = config.contains("generate_seed") ? config.unsigned_integer("generate_seed") : 1;
        const std::size_t count = config.unsigned_integer("generate_count");
        for (std::size_t k = 0; k < count; ++k) {
            Rng rng(derive_seed(gen_seed, k));
            auto inst = std::make_shared<const SukpInstance>(generate_instance(rng, params));
            const std::string group = "m" + std::to_string(params.items);
            spec.instances.push_back({"gen-" + group + "-" + zero_padded(k, 2), group, std::move(inst)});
        }
    }
    if (spec.instances.empty()) {
        throw ConfigError("matrix configuration lists no instances (use 'instances' or 'generate_count')");
    }

    if (config.contains("variants")) {
        for (const auto& text : config.strings("variants")) {
            spec.variants.push_back(Variant::parse(text));
        }
    } else {
        spec.variants.push_back(Variant{spec.base.scheme, run.transfer});
    }
    {
        std::set<Variant> unique(spec.variants.begin(), spec.variants.end());
        if (unique.size() != spec.variants.size()) {
            throw ConfigError("duplicate variant in matrix configuration");
        }
    }

    if (config.contains("seeds")) {
        spec.seeds = config.unsigned_integers("seeds");
    } else {
        const std::size_t count = config.contains("seed_count") ? config.unsigned_integer("seed_count") : 10;
        const std::uint64_t base = config.contains("base_seed") ? config.unsigned_integer("base_seed") : 1;
        for (std::size_t k = 0; k < count; ++k) {
            spec.seeds.push_back(derive_seed(base, k));
        }
    }
    if (spec.seeds.empty()) {
        throw ConfigError("matrix configuration has no seeds");
    }
    if (std::set<std::uint64_t>(spec.seeds.begin(), spec.seeds.end()).size() != spec.seeds.size()) {
        throw ConfigError("duplicate seed in matrix configuration");
    }

    if (config.contains("target_ratio")) spec.target_ratio = config.number("target_ratio");
    if (config.contains("parallel")) spec.parallel = config.unsigned_integer("parallel");
    if (config.contains("no_timing")) spec.record_wall_time = !config.boolean("no_timing");
    if (config.contains("experience")) spec.experience = resolve(config.string("experience"));
    if (config.contains("pretrain_seed")) spec.pretrain_seed = config.unsigned_integer("pretrain_seed");
    if (config.contains("pretrain_budget")) spec.pretrain_budget = config.unsigned_integer("pretrain_budget");
    if (spec.experience && !std::filesystem::exists(*spec.experience)) {
        throw IoError(*spec.experience, "experience file not found");
    }
    if (spec.parallel == 0) {
        throw ConfigError("parallel must be at least 1");
    }
    for (const auto& inst : spec.instances) {
        AbcConfig probe = spec.base;
        for (const auto& v : spec.variants) {
            probe.scheme = v.scheme;
            probe.validate(*inst.instance);
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------

namespace {

// Instance ids and scheme names are written verbatim; quote when needed.
std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n\r") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (char c : text) {
        quoted += c;
        if (c == '"') {
            quoted += '"';
        }
    }
    return quoted + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) {
        throw ParseError(ParseErrorKind::malformed_value, line_no, "unterminated quote");
    }
    fields.push_back(std::move(field));
    return fields;
}

constexpr std::string_view kRecordsHeader = "instance,scheme,mode,seed,best_fitness,evals_to_target,wall_time_s";

}  // namespace

void write_records_csv(std::span<const RunRecord> records, std::ostream& out) {
    out << kRecordsHeader << '\n';
    for (const auto& r : records) {
        out << csv_field(r.instance) << ',' << csv_field(r.scheme) << ',' << to_string(r.mode) << ',' << r.seed
            << ',' << format_double(r.best_fitness) << ','
            << (r.evals_to_target ? std::to_string(*r.evals_to_target) : std::string()) << ','
            << format_double(r.wall_time_s) << '\n';
    }
}

std::vector<RunRecord> parse_records_csv(std::string_view text) {
    std::vector<RunRecord> records;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (!header_seen) {
            if (line != kRecordsHeader) {
                throw ParseError(ParseErrorKind::malformed_header, line_no, "unexpected records header");
            }
            header_seen = true;
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line, line_no);
        if (fields.size() != 7) {
            throw ParseError(ParseErrorKind::dimension_mismatch, line_no,
                             "expected 7 fields, found " + std::to_string(fields.size()));
        }
        try {
            RunRecord r;
            r.instance = fields[0];
            r.scheme = std::string(to_string(parse_scheme(fields[1])));
            r.mode = parse_transfer_mode(fields[2]);
            std::size_t used = 0;
            r.seed = std::stoull(fields[3], &used);
            if (used != fields[3].size()) {
                throw std::invalid_argument("seed");
            }
            r.best_fitness = parse_double(fields[4]);
            if (!fields[5].empty()) {
                r.evals_to_target = static_cast<std::size_t>(std::stoull(fields[5], &used));
                if (used != fields[5].size()) {
                    throw std::invalid_argument("evals_to_target");
                }
            }
            r.wall_time_s = parse_double(fields[6]);
            records.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw ParseError(ParseErrorKind::malformed_value, line_no, e.what());
        }
    }
    if (!header_seen) {
        throw ParseError(ParseErrorKind::malformed_header, 0, "missing records header");
    }
    return records;
}

void write_ranks_csv(const RankTable& table, std::ostream& out) {
    out << "instance,scheme,mean_rank\n";
    for (const auto& inst : table.instances) {
        for (const auto& v : table.variants) {
            out << csv_field(inst) << ',' << csv_field(v) << ',' << format_double(table.mean(inst, v)) << '\n';
        }
    }
}

void write_plot_data(const RankTable& table, const std::map<std::string, std::string>& groups, std::ostream& out) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::string>> members;
    for (const auto& inst : table.instances) {
        const auto it = groups.find(inst);
        const std::string group = it == groups.end() ? inst : it->second;
        if (members.find(group) == members.end()) {
            order.push_back(group);
        }
        members[group].push_back(inst);
    }
    out << "group,scheme,mean_rank\n";
    for (const auto& group : order) {
        for (const auto& v : table.variants) {
            double total = 0.0;
            for (const auto& inst : members[group]) {
                total += table.mean(inst, v);
            }
            out << csv_field(group) << ',' << csv_field(v) << ','
                << format_double(total / static_cast<double>(members[group].size())) << '\n';
        }
    }
}

namespace {

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path, "cannot open for writing");
    }
    body(out);
    out.flush();
    if (!out) {
        throw IoError(path, "write failed");
    }
}

}  // namespace

void emit_results(std::span<const RunRecord> records, const RankTable& table,
                  const std::map<std::string, std::string>& groups, const OutputPaths& paths) {
    write_file(paths.records, [&](std::ostream& out) { write_records_csv(records, out); });
    write_file(paths.ranks, [&](std::ostream& out) { write_ranks_csv(table, out); });
    write_file(paths.plot_data, [&](std::ostream& out) { write_plot_data(table, groups, out); });
}

}  // namespace aos
