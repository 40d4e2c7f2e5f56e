#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aos/bench.hpp"
#include "aos/rng.hpp"

using namespace aos;

namespace {

NamedInstance generated(const std::string& id, std::uint64_t seed, std::size_t m = 15) {
    Rng rng(seed);
    GeneratorParams params;
    params.items = m;
    params.elements = m;
    params.density = 0.2;
    return {id, "m" + std::to_string(m), std::make_shared<const SukpInstance>(generate_instance(rng, params))};
}

MatrixSpec small_matrix() {
    MatrixSpec spec;
    spec.instances = {generated("a", 1), generated("b", 2)};
    spec.variants = {{SchemeKind::random}, {SchemeKind::pm}, {SchemeKind::rl}};
    spec.seeds = {1, 2, 3, 4, 5};
    spec.base.budget = 600;
    spec.record_wall_time = false;
    return spec;
}

RunRecord record(const std::string& inst, const std::string& scheme, std::uint64_t seed, double fitness,
                 std::optional<std::size_t> evals = std::nullopt) {
    return RunRecord{inst, scheme, TransferMode::fresh, seed, fitness, evals, 0.0};
}

std::string records_csv(std::span<const RunRecord> records) {
    std::ostringstream out;
    write_records_csv(records, out);
    return out.str();
}

}  // namespace

TEST(Variant, Labels) {
    EXPECT_EQ((Variant{SchemeKind::pm, TransferMode::fresh}).label(), "pm");
    EXPECT_EQ((Variant{SchemeKind::rl, TransferMode::continue_learning}).label(), "rl:continue");
    EXPECT_EQ(Variant::parse("rl:frozen"), (Variant{SchemeKind::rl, TransferMode::frozen}));
    EXPECT_THROW(Variant::parse("pm:frozen"), ConfigError);
    EXPECT_THROW(Variant::parse("greedy"), ConfigError);
}

TEST(Matrix, CardinalityAndDeterminism) {
    const MatrixSpec spec = small_matrix();
    const MatrixResult first = run_matrix(spec);
    EXPECT_EQ(first.records.size(), 30u);
    EXPECT_TRUE(first.failures.empty());
    const MatrixResult second = run_matrix(spec);
    EXPECT_EQ(first.records, second.records);
}

TEST(Matrix, ParallelMatchesSerial) {
    MatrixSpec spec = small_matrix();
    spec.variants.push_back({SchemeKind::rl, TransferMode::continue_learning});
    spec.variants.push_back({SchemeKind::rl, TransferMode::frozen});
    const MatrixResult serial = run_matrix(spec);
    spec.parallel = 4;
    const MatrixResult parallel = run_matrix(spec);
    EXPECT_EQ(records_csv(serial.records), records_csv(parallel.records));
    EXPECT_EQ(serial.records.size(), 50u);
}

TEST(Matrix, TargetsAndEvalsToTarget) {
    const MatrixResult result = run_matrix(small_matrix());
    for (const auto& r : result.records) {
        const double target = result.targets.at(r.instance);
        if (r.best_fitness >= target) {
            EXPECT_TRUE(r.evals_to_target.has_value());
        } else {
            EXPECT_FALSE(r.evals_to_target.has_value());
        }
    }
}

TEST(Matrix, SingleSchemeRanksAllOne) {
    MatrixSpec spec = small_matrix();
    spec.variants = {{SchemeKind::rl}};
    const RankTable table = rank_table(run_matrix(spec).records);
    EXPECT_EQ(table.grand("rl"), 1.0);
}

TEST(Matrix, FailuresAreRecorded) {
    MatrixSpec spec = small_matrix();
    spec.variants = {{SchemeKind::rl}, {SchemeKind::rl, TransferMode::frozen}};
    const auto path = std::filesystem::temp_directory_path() / "aos_bench_wrong_shape.json";
    save_experience(CreditModel(4, 1, 3), path);
    spec.experience = path;
    const MatrixResult result = run_matrix(spec);
    EXPECT_EQ(result.records.size(), 10u);
    EXPECT_EQ(result.failures.size(), 10u);
    for (const auto& f : result.failures) {
        EXPECT_EQ(f.variant, "rl:frozen");
        EXPECT_NE(f.message.find("experience"), std::string::npos);
    }
    EXPECT_NO_THROW(rank_table(result.records));
    const std::vector<std::string> expected{"rl", "rl:frozen"};
    EXPECT_THROW(rank_table(result.records, RankKey::fitness, expected), IncompleteCellsError);
    std::filesystem::remove(path);
}

TEST(RankTable, TieRule) {
    const std::vector<RunRecord> records{record("i", "rl", 1, 10), record("i", "pm", 1, 7),
                                         record("i", "random", 1, 7)};
    const RankTable t = rank_table(records);
    EXPECT_EQ(t.mean("i", "rl"), 1.0);
    EXPECT_EQ(t.mean("i", "pm"), 2.5);
    EXPECT_EQ(t.mean("i", "random"), 2.5);
}

TEST(RankTable, ForcedAndSymmetric) {
    std::vector<RunRecord> records;
    Rng rng(3);
    for (const std::string inst : {"x", "y"}) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const double base = rng.uniform01();
            records.push_back(record(inst, "rl", seed, base + 2));
            records.push_back(record(inst, "pm", seed, base));
            records.push_back(record(inst, "random", seed, base));
        }
    }
    const RankTable t = rank_table(records);
    EXPECT_EQ(t.grand("rl"), 1.0);
    EXPECT_EQ(t.grand("pm"), t.grand("random"));
}

TEST(RankTable, MonotoneTransformInvariance) {
    std::vector<RunRecord> records;
    Rng rng(4);
    for (const std::string inst : {"x", "y", "z"}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            for (const std::string scheme : {"rl", "pm", "random", "ucb"}) {
                records.push_back(record(inst, scheme, seed, static_cast<double>(rng.uniform_index(5))));
            }
        }
    }
    std::vector<RunRecord> transformed = records;
    for (auto& r : transformed) {
        r.best_fitness = std::exp(3.0 * r.best_fitness) - 17.0;
    }
    EXPECT_EQ(rank_table(records), rank_table(transformed));
}

TEST(RankTable, EvalsKeyMissingIsWorst) {
    const std::vector<RunRecord> records{record("i", "rl", 1, 0, 100), record("i", "pm", 1, 0, 50),
                                         record("i", "random", 1, 0, std::nullopt)};
    const RankTable t = rank_table(records, RankKey::evals_to_target);
    EXPECT_EQ(t.mean("i", "pm"), 1.0);
    EXPECT_EQ(t.mean("i", "rl"), 2.0);
    EXPECT_EQ(t.mean("i", "random"), 3.0);
}

TEST(RankTable, IncompleteCellsNamed) {
    const std::vector<RunRecord> records{record("i", "rl", 1, 1), record("i", "pm", 1, 2), record("i", "rl", 2, 1)};
    try {
        rank_table(records);
        FAIL();
    } catch (const IncompleteCellsError& e) {
        ASSERT_EQ(e.cells().size(), 1u);
        EXPECT_EQ(e.cells()[0], "instance=i seed=2 variant=pm missing");
    }
}

TEST(Emit, EmptyRecordsHeadersOnly) {
    EXPECT_EQ(records_csv({}), "instance,scheme,mode,seed,best_fitness,evals_to_target,wall_time_s\n");
    std::ostringstream ranks;
    write_ranks_csv(rank_table({}), ranks);
    EXPECT_EQ(ranks.str(), "instance,scheme,mean_rank\n");
}

TEST(Emit, RoundTripGivesIdenticalRankTable) {
    MatrixSpec spec = small_matrix();
    spec.record_wall_time = true;
    const MatrixResult result = run_matrix(spec);
    const std::string text = records_csv(result.records);
    const std::vector<RunRecord> parsed = parse_records_csv(text);
    EXPECT_EQ(parsed, result.records);
    EXPECT_EQ(rank_table(parsed), rank_table(result.records));
    EXPECT_EQ(rank_table(parsed, RankKey::evals_to_target), rank_table(result.records, RankKey::evals_to_target));
}

TEST(Emit, PlotDataCardinality) {
    MatrixSpec spec = small_matrix();
    spec.instances.push_back(generated("c", 3, 12));
    const MatrixResult result = run_matrix(spec);
    const RankTable table = rank_table(result.records);
    std::map<std::string, std::string> groups;
    for (const auto& inst : spec.instances) {
        groups[inst.id] = inst.group;
    }
    std::ostringstream plot;
    write_plot_data(table, groups, plot);
    std::size_t lines = 0;
    std::string line;
    std::istringstream in(plot.str());
    while (std::getline(in, line)) {
        ++lines;
    }
    EXPECT_EQ(lines, 1u + 2u * 3u);
}

TEST(Emit, WritesFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "aos_emit_test";
    std::filesystem::remove_all(dir);
    const std::vector<RunRecord> records{record("i", "rl", 1, 2), record("i", "pm", 1, 1)};
    emit_results(records, rank_table(records), {{"i", "g"}},
                 OutputPaths{dir / "records.csv", dir / "ranks.csv", dir / "plot.csv"});
    std::ifstream plot(dir / "plot.csv");
    std::stringstream buffer;
    buffer << plot.rdbuf();
    EXPECT_EQ(buffer.str(), "group,scheme,mean_rank\ng,rl,1\ng,pm,2\n");
    std::filesystem::remove_all(dir);
    EXPECT_THROW(emit_results(records, rank_table(records), {},
                              OutputPaths{"/proc/forbidden/r.csv", "/proc/forbidden/k.csv", "/proc/forbidden/p.csv"}),
                 IoError);
}

TEST(Emit, MalformedRecordsCsv) {
    EXPECT_THROW(parse_records_csv("bogus\n"), ParseError);
    EXPECT_THROW(parse_records_csv("instance,scheme,mode,seed,best_fitness,evals_to_target,wall_time_s\na,rl,fresh,1\n"),
                 ParseError);
    EXPECT_THROW(
        parse_records_csv("instance,scheme,mode,seed,best_fitness,evals_to_target,wall_time_s\na,rl,fresh,x,1,,0\n"),
        ParseError);
}

TEST(MatrixConfig, BuildsSpec) {
    const KeyValueConfig config = KeyValueConfig::parse(
        "generate_count = 3\ngenerate_items = 12\ngenerate_elements = 10\n"
        "variants = [\"random\", \"rl\", \"rl:continue\"]\nseed_count = 4\nbudget = 500\n");
    const MatrixSpec spec = matrix_spec_from(config);
    EXPECT_EQ(spec.instances.size(), 3u);
    EXPECT_EQ(spec.instances[0].id, "gen-m12-00");
    EXPECT_EQ(spec.instances[0].group, "m12");
    EXPECT_EQ(spec.variants.size(), 3u);
    EXPECT_EQ(spec.seeds.size(), 4u);
    EXPECT_EQ(spec.base.budget, 500u);
}

TEST(MatrixConfig, Errors) {
    EXPECT_THROW(matrix_spec_from(KeyValueConfig::parse("instances = [\"/nonexistent/a.sukp\"]\n")), IoError);
    EXPECT_THROW(matrix_spec_from(KeyValueConfig::parse("seeds = [1]\n")), ConfigError);
    EXPECT_THROW(matrix_spec_from(KeyValueConfig::parse("generate_count = 1\nvariants = [\"rl\", \"rl\"]\n")),
                 ConfigError);
    EXPECT_THROW(matrix_spec_from(KeyValueConfig::parse("generate_count = 1\nbogus_key = 3\n")), ConfigError);
}
