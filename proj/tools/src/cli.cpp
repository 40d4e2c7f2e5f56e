#include "aos/tools/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aos/abc.hpp"
#include "aos/bench.hpp"
#include "aos/config.hpp"
#include "aos/credit.hpp"
#include "aos/error.hpp"
#include "aos/format.hpp"
#include "aos/moo.hpp"
#include "aos/problem.hpp"
#include "aos/rng.hpp"
#include "aos/stats.hpp"

namespace aos::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kSchemes = {"random", "pm", "ap", "ucb", "rl"};
const std::vector<std::string> kTransferModes = {"fresh", "frozen", "continue"};

constexpr const char* kPrecedence =
    "Flags override keys of the --config file, which override built-in defaults.";

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Options shared by solve and bench; each maps to one configuration key.
struct RunFlags {
    std::optional<std::string> scheme, credit_mode, transfer, experience_in, experience_out, output_dir;
    std::optional<double> p_min, alpha, pursuit_rate, ucb_c, epsilon, beta, gamma;
    std::optional<std::size_t> colony_size, limit, budget, archive_capacity;
    std::optional<std::uint64_t> seed;
    std::vector<double> weights;
    std::vector<std::string> operators;

    void attach(CLI::App& app) {
        app.add_option("--scheme", scheme, "Selection scheme")->check(CLI::IsMember(kSchemes));
        app.add_option("--seed", seed, "Random seed");
        app.add_option("--budget", budget, "Evaluation budget, initialization included");
        app.add_option("--colony-size", colony_size, "Number of food sources");
        app.add_option("--limit", limit, "Trials before a source is abandoned");
        app.add_option("--weights", weights, "Objective weights, summing to 1")->delimiter(',');
        app.add_option("--operators", operators, "Operator pool, e.g. flip1,flipk:3,bestmix:0.3,exchange")
            ->delimiter(',');
        app.add_option("--p-min", p_min, "Probability floor (pm, ap)");
        app.add_option("--alpha", alpha, "Quality recency weight (pm, ap, ucb)");
        app.add_option("--pursuit-rate", pursuit_rate, "Pursuit rate (ap)");
        app.add_option("--ucb-c", ucb_c, "Exploration constant (ucb)");
        app.add_option("--epsilon", epsilon, "Exploration rate (rl)");
        app.add_option("--beta", beta, "Learning rate (rl)");
        app.add_option("--gamma", gamma, "Discount factor (rl)");
        app.add_option("--credit-mode", credit_mode, "Credit from centre distance")
            ->check(CLI::IsMember({"similarity", "literal"}));
        app.add_option("--archive-capacity", archive_capacity, "Pareto archive size bound");
    }

    void attach_transfer(CLI::App& app) {
        app.add_option("--transfer", transfer, "Experience mode")->check(CLI::IsMember(kTransferModes));
        app.add_option("--experience-in", experience_in, "Experience file to start from");
        app.add_option("--experience-out", experience_out, "Write the final credit model here");
    }

    void apply(KeyValueConfig& config) const {
        auto put = [&config](const char* key, const auto& value) {
            if (value) {
                config.set(key, json(*value).dump());
            }
        };
        put("scheme", scheme);
        put("credit_mode", credit_mode);
        put("transfer", transfer);
        put("experience_in", experience_in);
        put("experience_out", experience_out);
        put("output_dir", output_dir);
        put("p_min", p_min);
        put("alpha", alpha);
        put("pursuit_rate", pursuit_rate);
        put("ucb_c", ucb_c);
        put("epsilon", epsilon);
        put("beta", beta);
        put("gamma", gamma);
        put("colony_size", colony_size);
        put("limit", limit);
        put("budget", budget);
        put("archive_capacity", archive_capacity);
        put("seed", seed);
        if (!weights.empty()) {
            config.set("weights", json(weights).dump());
        }
        if (!operators.empty()) {
            config.set("operators", json(operators).dump());
        }
    }
};

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path, "cannot open for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError(path, "write failed");
    }
}

json numbers(std::span<const double> values) {
    json out = json::array();
    for (double v : values) {
        out.push_back(v);
    }
    return out;
}

// ---------------------------------------------------------------------------

int solve(const std::optional<std::string>& instance_arg, const std::optional<std::string>& config_path,
          const RunFlags& flags, std::optional<double> target, std::ostream& out) {
    KeyValueConfig config;
    fs::path base_dir;
    if (config_path) {
        config = KeyValueConfig::load(*config_path);
        base_dir = fs::path(*config_path).parent_path();
    }
    flags.apply(config);
    if (instance_arg) {
        config.set("instance", json(*instance_arg).dump());
    }
    // Flag values are given relative to the working directory.
    RunSettings settings = run_settings_from(config, {}, base_dir);
    if (instance_arg) {
        settings.instance = *instance_arg;
    }
    if (flags.output_dir) settings.output_dir = *flags.output_dir;
    if (flags.experience_in) settings.experience_in = *flags.experience_in;
    if (flags.experience_out) settings.experience_out = *flags.experience_out;
    if (!settings.instance) {
        throw UsageError("solve needs an instance path");
    }
    if (!settings.output_dir) {
        throw UsageError("solve needs --output-dir");
    }

    const SukpInstance instance = load_instance(*settings.instance);
    settings.abc.validate(instance);
    const ModelShape shape{settings.abc.operators.size(), instance.objective_count(), instance.item_count()};
    std::optional<CreditModel> model;
    if (settings.transfer != TransferMode::fresh) {
        if (!settings.experience_in) {
            throw ConfigError("transfer mode '" + std::string(to_string(settings.transfer)) +
                              "' needs --experience-in");
        }
        if (settings.abc.scheme != SchemeKind::rl) {
            throw ConfigError("transfer modes apply to the rl scheme only");
        }
        model = load_experience(*settings.experience_in, settings.transfer, shape, settings.abc.credit_params);
    }

    RunOptions options;
    options.target = target;
    const RunResult result = run(instance, settings.abc, std::move(model), options);

    const fs::path dir = *settings.output_dir;
    json summary;
    summary["instance"] = settings.instance->string();
    summary["scheme"] = std::string(to_string(settings.abc.scheme));
    summary["transfer"] = std::string(to_string(settings.transfer));
    summary["seed"] = settings.abc.seed;
    summary["budget"] = settings.abc.budget;
    summary["evaluations"] = result.evaluations;
    summary["best_fitness"] = result.best_fitness;
    summary["best_solution"] = result.best_solution.to_string();
    summary["objectives"] = numbers(result.best_evaluation.objectives);
    summary["union_weight"] = result.best_evaluation.union_weight;
    summary["feasible"] = result.best_evaluation.feasible;
    summary["archive_size"] = result.archive.size();
    summary["scouts"] = result.scouts;
    summary["operators"] = settings.abc.operators.names();
    summary["operator_usage"] = result.operator_usage;
    if (target) {
        summary["target"] = *target;
        summary["evals_to_target"] = result.evals_to_target ? json(*result.evals_to_target) : json(nullptr);
    }
    write_text(dir / "summary.json", summary.dump(2) + "\n");

    std::string history = "evaluations,best_fitness\n";
    for (const auto& point : result.history) {
        history += std::to_string(point.evaluations) + ',' + format_double(point.best_fitness) + '\n';
    }
    write_text(dir / "history.csv", history);

    std::ostringstream archive;
    write_archive_csv(result.archive, archive);
    write_text(dir / "archive.csv", archive.str());

    if (settings.experience_out) {
        save_experience(result.model, *settings.experience_out);
    }
    out << "best_fitness " << format_double(result.best_fitness) << '\n'
        << "best_solution " << result.best_solution.to_string() << '\n'
        << "evaluations " << result.evaluations << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

void report_ordering(const RankTable& table, const std::vector<std::string>& expected, const char* title,
                     std::ostream& out) {
    for (const auto& v : expected) {
        if (table.grand_mean_rank.find(v) == table.grand_mean_rank.end()) {
            return;
        }
    }
    bool holds = true;
    std::string chain;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        chain += (i ? " < " : "") + expected[i];
        if (i && !(table.grand(expected[i - 1]) < table.grand(expected[i]))) {
            holds = false;
        }
    }
    out << title << " ordering " << chain << ": " << (holds ? "holds" : "VIOLATED") << '\n';
}

void report_rank_sum(std::span<const RunRecord> records, const std::string& a, const std::string& b,
                     std::ostream& out) {
    std::map<std::string, double> best;
    for (const auto& r : records) {
        auto [it, inserted] = best.emplace(r.instance, r.best_fitness);
        if (!inserted) {
            it->second = std::max(it->second, r.best_fitness);
        }
    }
    std::vector<double> xa, xb;
    for (const auto& r : records) {
        const double scale = best[r.instance] != 0.0 ? best[r.instance] : 1.0;
        if (r.variant() == a) xa.push_back(r.best_fitness / scale);
        if (r.variant() == b) xb.push_back(r.best_fitness / scale);
    }
    if (xa.size() < 3 || xb.size() < 3) {
        return;
    }
    const RankSumResult w = wilcoxon_rank_sum(xa, xb);
    out << "rank-sum " << a << " vs " << b << " (normalized fitness): U=" << format_double(w.u_a)
        << " p=" << format_double(w.p_value) << " direction=" << to_string(w.direction) << '\n';
}

int bench(const std::string& config_path, const RunFlags& flags, std::optional<std::size_t> parallel,
          bool no_timing, std::optional<std::string> rank_key, std::ostream& out, std::ostream& err) {
    KeyValueConfig config = KeyValueConfig::load(config_path);
    flags.apply(config);
    if (parallel) config.set("parallel", std::to_string(*parallel));
    if (no_timing) config.set("no_timing", "true");
    if (rank_key) config.set("rank_key", json(*rank_key).dump());

    const fs::path base_dir = fs::path(config_path).parent_path();
    MatrixSpec spec = matrix_spec_from(config, base_dir);
    const RunSettings settings = run_settings_from(config, {}, base_dir, matrix_setting_keys());
    fs::path dir = flags.output_dir ? fs::path(*flags.output_dir) : settings.output_dir.value_or(fs::path());
    if (dir.empty()) {
        throw UsageError("bench needs --output-dir (or output_dir in the configuration)");
    }
    auto output = [&](const char* key, const char* fallback) {
        if (!config.contains(key)) {
            return dir / fallback;
        }
        fs::path p = config.string(key);
        return p.is_relative() ? dir / p : p;
    };
    const OutputPaths paths{output("records", "records.csv"), output("ranks", "ranks.csv"),
                            output("plot_data", "plot_data.csv")};
    RankKey key = RankKey::fitness;
    if (config.contains("rank_key")) {
        const std::string text = config.string("rank_key");
        if (text == "evals_to_target") {
            key = RankKey::evals_to_target;
        } else if (text != "fitness") {
            throw ConfigError("rank_key must be 'fitness' or 'evals_to_target'");
        }
    }

    const MatrixResult result = run_matrix(spec);
    for (const auto& f : result.failures) {
        err << "run failed: instance=" << f.instance << " variant=" << f.variant
            << " seed=" << (f.seed ? std::to_string(*f.seed) : std::string("-")) << ": " << f.message << '\n';
    }

    std::map<std::string, std::string> groups;
    for (const auto& inst : spec.instances) {
        groups[inst.id] = inst.group;
    }
    std::vector<std::string> labels;
    for (const auto& v : spec.variants) {
        labels.push_back(v.label());
    }
    RankTable table;
    try {
        table = rank_table(result.records, key, labels);
    } catch (const IncompleteCellsError& e) {
        std::ostringstream records;
        write_records_csv(result.records, records);
        write_text(paths.records, records.str());
        for (const auto& cell : e.cells()) {
            err << "incomplete cell: " << cell << '\n';
        }
        return kConfig;
    }
    emit_results(result.records, table, groups, paths);

    out << "records " << result.records.size() << " failures " << result.failures.size() << '\n';
    std::vector<std::string> variants = table.variants;
    std::stable_sort(variants.begin(), variants.end(),
                     [&](const std::string& l, const std::string& r) { return table.grand(l) < table.grand(r); });
    for (const auto& v : variants) {
        out << "grand_mean_rank " << v << ' ' << format_double(table.grand(v)) << '\n';
    }
    report_ordering(table, {"rl", "pm", "random"}, "scheme", out);
    report_ordering(table, {"rl:continue", "rl:frozen", "rl"}, "transfer", out);
    report_rank_sum(result.records, "rl", "random", out);
    return result.failures.empty() ? kOk : kConfig;
}

// ---------------------------------------------------------------------------

int oracle(const std::string& instance_path, const std::vector<double>& weights, std::ostream& out) {
    const SukpInstance instance = load_instance(instance_path);
    const WeightVector w = weights.empty() ? WeightVector::uniform(instance.objective_count()) : WeightVector(weights);
    if (w.size() != instance.objective_count()) {
        throw DimensionError("instance has " + std::to_string(instance.objective_count()) + " objectives, got " +
                             std::to_string(w.size()) + " weights");
    }
    const Optimum best = brute_force_optimum(instance, w.values());
    out << "fitness " << format_double(best.fitness) << '\n' << "solution " << best.solution.to_string() << '\n';
    return kOk;
}

int gen(const GeneratorParams& params, std::uint64_t seed, const std::string& output, std::ostream& out) {
    Rng rng(seed);
    const SukpInstance instance = generate_instance(rng, params);
    save_instance(instance, output);
    out << "wrote " << output << '\n';
    return kOk;
}

int inspect(const std::string& path, std::ostream& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path, "cannot open experience file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const CreditModel model = parse_experience(buffer.str());
    out << "version " << kExperienceVersion << '\n'
        << "operators " << model.operator_count() << '\n'
        << "objectives " << model.objective_count() << '\n'
        << "solution_length " << model.solution_length() << '\n'
        << "beta " << format_double(model.params().beta) << '\n'
        << "gamma " << format_double(model.params().gamma) << '\n';
    out << "operator,objective,successes,q,center_mean\n";
    for (std::size_t i = 0; i < model.operator_count(); ++i) {
        for (std::size_t j = 0; j < model.objective_count(); ++j) {
            const auto c = model.center(OperatorId{i}, j);
            double mean = 0.0;
            for (double v : c) {
                mean += v;
            }
            mean = c.empty() ? 0.0 : mean / static_cast<double>(c.size());
            out << i << ',' << j << ',' << model.counter(OperatorId{i}, j) << ',' << format_double(model.q(OperatorId{i}, j)) << ','
                << format_double(mean) << '\n';
        }
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive operator selection for the Set Union Knapsack Problem", "aos"};
    app.require_subcommand(1);
    app.footer(kPrecedence);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Run the bee colony solver on one instance");
    std::optional<std::string> solve_instance, solve_config;
    std::optional<double> solve_target;
    RunFlags solve_flags;
    solve_cmd->add_option("instance", solve_instance, "Instance file");
    solve_cmd->add_option("--config", solve_config, "key = value configuration file");
    solve_cmd->add_option("--output-dir,-o", solve_flags.output_dir, "Directory for summary, history and archive");
    solve_cmd->add_option("--target", solve_target, "Report evaluations needed to reach this fitness");
    solve_flags.attach(*solve_cmd);
    solve_flags.attach_transfer(*solve_cmd);
    solve_cmd->footer(kPrecedence);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run an experiment matrix and write records and ranks");
    std::string bench_config;
    std::optional<std::size_t> bench_parallel;
    std::optional<std::string> bench_rank_key;
    bool bench_no_timing = false;
    RunFlags bench_flags;
    bench_cmd->add_option("config", bench_config, "Matrix configuration file")->required();
    bench_cmd->add_option("--output-dir,-o", bench_flags.output_dir, "Directory for CSV output");
    bench_cmd->add_option("--parallel", bench_parallel, "Concurrent runs")->check(CLI::PositiveNumber);
    bench_cmd->add_flag("--no-timing", bench_no_timing, "Write 0 as wall time so output is reproducible");
    bench_cmd->add_option("--rank-key", bench_rank_key, "Ranking key")
        ->check(CLI::IsMember({"fitness", "evals_to_target"}));
    bench_flags.attach(*bench_cmd);
    bench_cmd->footer(kPrecedence);

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive optimum of a small instance (at most 24 items)");
    std::string oracle_instance;
    std::vector<double> oracle_weights;
    oracle_cmd->add_option("instance", oracle_instance, "Instance file")->required();
    oracle_cmd->add_option("--weights", oracle_weights, "Objective weights, summing to 1")->delimiter(',');

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
    GeneratorParams gen_params;
    std::uint64_t gen_seed = 1;
    std::string gen_output;
    gen_cmd->add_option("--items,-m", gen_params.items, "Item count")->capture_default_str();
    gen_cmd->add_option("--elements,-n", gen_params.elements, "Element count")->capture_default_str();
    gen_cmd->add_option("--objectives", gen_params.objectives, "Objective count")->capture_default_str();
    gen_cmd->add_option("--density", gen_params.density, "Membership probability")->capture_default_str();
    gen_cmd->add_option("--capacity-ratio", gen_params.capacity_ratio, "Capacity as a share of total weight")
        ->capture_default_str();
    gen_cmd->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
    gen_cmd->add_option("--output", gen_output, "Instance file to write")->required();

    // experience-inspect
    auto* inspect_cmd = app.add_subcommand("experience-inspect", "Summarize a saved credit model");
    std::string inspect_path;
    inspect_cmd->add_option("file", inspect_path, "Experience file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (*solve_cmd) {
            return solve(solve_instance, solve_config, solve_flags, solve_target, out);
        }
        if (*bench_cmd) {
            return bench(bench_config, bench_flags, bench_parallel, bench_no_timing, bench_rank_key, out, err);
        }
        if (*oracle_cmd) {
            return oracle(oracle_instance, oracle_weights, out);
        }
        if (*gen_cmd) {
            return gen(gen_params, gen_seed, gen_output, out);
        }
        if (*inspect_cmd) {
            return inspect(inspect_path, out);
        }
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kIo;
    } catch (const ExperienceError& e) {
        err << "experience error: " << e.what() << '\n';
        return e.kind() == ExperienceErrorKind::dimension ? kConfig : kIo;
    } catch (const DimensionError& e) {
        err << "dimension error: " << e.what() << '\n';
        return kConfig;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfig;
    }
    return kUsage;
}

}  // namespace aos::cli
