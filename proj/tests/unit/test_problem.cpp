#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "aos/error.hpp"
#include "aos/problem.hpp"
#include "aos/rng.hpp"
#include "oracles.hpp"

using namespace aos;

namespace {

constexpr const char* kTinyText = "3 3 1\n9\n10 6 4\n3 4 5\n1 1 0\n0 1 1\n0 0 1\n";

SukpInstance random_instance(std::uint64_t seed, std::size_t m, std::size_t n, std::size_t objectives = 1) {
    Rng rng(seed);
    GeneratorParams params;
    params.items = m;
    params.elements = n;
    params.objectives = objectives;
    params.density = 0.3;
    return generate_instance(rng, params);
}

BitSolution random_bits(Rng& rng, std::size_t m) {
    BitSolution x(m);
    for (std::size_t i = 0; i < m; ++i) {
        x.set(i, rng.bernoulli(0.5));
    }
    return x;
}

ParseErrorKind parse_kind(const std::string& text) {
    try {
        parse_instance(text);
    } catch (const ParseError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no parse error for:\n" << text;
    return ParseErrorKind::malformed_value;
}

}  // namespace

TEST(Parse, WorkedFile) {
    const SukpInstance inst = parse_instance(kTinyText);
    EXPECT_EQ(inst.item_count(), 3u);
    EXPECT_EQ(inst.element_count(), 3u);
    EXPECT_EQ(inst.objective_count(), 1u);
    EXPECT_EQ(inst.capacity(), 9.0);
    EXPECT_TRUE(inst.contains(0, 1));
    EXPECT_FALSE(inst.contains(0, 2));
    EXPECT_EQ(inst.total_profit(0), 20.0);
}

TEST(Parse, CommentsAndBlankLines) {
    const SukpInstance inst =
        parse_instance("# header follows\n3 3 1 # m n O\n\n9\n10 6 4\n3 4 5\n1 1 0\n0 1 1 # row 2\n0 0 1\n");
    EXPECT_EQ(inst.capacity(), 9.0);
}

TEST(Parse, DistinctErrorKinds) {
    EXPECT_EQ(parse_kind("2 3 1\n9\n10 6 4\n3 4 5\n1 1 0\n0 1 1\n"), ParseErrorKind::dimension_mismatch);
    EXPECT_EQ(parse_kind("3 3 1\n9\n10 6 4\n3 4 5\n1 1 0\n0 0 0\n0 0 1\n"), ParseErrorKind::empty_item);
    EXPECT_EQ(parse_kind("3 3 1\n9\n10 -6 4\n3 4 5\n1 1 0\n0 1 1\n0 0 1\n"), ParseErrorKind::negative_value);
    EXPECT_EQ(parse_kind("3 x 1\n9\n10 6 4\n3 4 5\n1 1 0\n0 1 1\n0 0 1\n"), ParseErrorKind::malformed_header);
    EXPECT_EQ(parse_kind("3 3 1\n9\n10 6 4\n3 4 5\n1 2 0\n0 1 1\n0 0 1\n"), ParseErrorKind::malformed_value);
    EXPECT_EQ(parse_kind("3 3 1\n9\n10 6 4\n3 4 5\n1 1 0\n0 1 1\n"), ParseErrorKind::dimension_mismatch);
    EXPECT_EQ(parse_kind(""), ParseErrorKind::malformed_header);
}

TEST(Parse, ErrorNamesLine) {
    try {
        parse_instance("3 3 1\n9\n10 6 4\n3 4 5\n1 1 0\n0 0 0\n0 0 1\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 6u);
    }
}

TEST(Parse, FormatRoundTrip) {
    const SukpInstance inst = random_instance(5, 17, 13, 2);
    const SukpInstance again = parse_instance(format_instance(inst));
    EXPECT_EQ(format_instance(again), format_instance(inst));
    EXPECT_EQ(again.capacity(), inst.capacity());
}

TEST(Parse, LoadMissingFileIsIoError) {
    EXPECT_THROW(load_instance("/nonexistent/instance.sukp"), IoError);
}

TEST(Parse, SaveAndLoad) {
    const auto path = std::filesystem::temp_directory_path() / "aos_problem_roundtrip.sukp";
    const SukpInstance inst = oracle::tiny_instance();
    save_instance(inst, path);
    EXPECT_EQ(format_instance(load_instance(path)), format_instance(inst));
    std::filesystem::remove(path);
}

TEST(Instance, RejectsInvalidData) {
    EXPECT_THROW(SukpInstance({{1}}, {1}, {{0}}, 1), std::invalid_argument);
    EXPECT_THROW(SukpInstance({{1}}, {1}, {{1}}, -1), std::invalid_argument);
    EXPECT_THROW(SukpInstance({{-1}}, {1}, {{1}}, 1), std::invalid_argument);
    EXPECT_THROW(SukpInstance({{1, 2}}, {1}, {{1}}, 1), std::invalid_argument);
}

TEST(Evaluate, WorkedExamples) {
    const SukpInstance inst = oracle::tiny_instance();
    const Evaluation empty = evaluate(inst, BitSolution::from_string("000"));
    EXPECT_EQ(empty.objectives, std::vector<double>{0});
    EXPECT_EQ(empty.union_weight, 0.0);
    EXPECT_TRUE(empty.feasible);

    const Evaluation two = evaluate(inst, BitSolution::from_string("011"));
    EXPECT_EQ(two.objectives, std::vector<double>{10});
    EXPECT_EQ(two.union_weight, 9.0);
    EXPECT_TRUE(two.feasible);

    const Evaluation over = evaluate(inst, BitSolution::from_string("110"));
    EXPECT_EQ(over.objectives, std::vector<double>{16});
    EXPECT_EQ(over.union_weight, 12.0);
    EXPECT_FALSE(over.feasible);
}

TEST(Evaluate, LengthMismatch) {
    EXPECT_THROW(evaluate(oracle::tiny_instance(), BitSolution(4)), DimensionError);
}

TEST(Evaluate, MatchesNaiveOracle) {
    Rng rng(11);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SukpInstance inst = random_instance(seed, 40, 150, 2);
        for (int t = 0; t < 20; ++t) {
            const BitSolution x = random_bits(rng, inst.item_count());
            const Evaluation ev = evaluate(inst, x);
            const auto ref = oracle::naive_evaluate(inst, x);
            EXPECT_EQ(ev.objectives, ref.objectives);
            EXPECT_DOUBLE_EQ(ev.union_weight, ref.union_weight);
            EXPECT_EQ(ev.feasible, ref.feasible);
        }
    }
}

TEST(Evaluate, UnionWeightMonotone) {
    Rng rng(3);
    const SukpInstance inst = random_instance(1, 30, 60);
    for (int t = 0; t < 200; ++t) {
        const BitSolution x = random_bits(rng, 30);
        BitSolution superset = x;
        for (std::size_t i = 0; i < 30; ++i) {
            if (rng.bernoulli(0.3)) {
                superset.set(i, true);
            }
        }
        EXPECT_LE(evaluate(inst, x).union_weight, evaluate(inst, superset).union_weight);
    }
}

TEST(Evaluate, ObjectiveLinearity) {
    Rng rng(4);
    const SukpInstance inst = random_instance(2, 25, 40, 3);
    for (int t = 0; t < 100; ++t) {
        const BitSolution x = random_bits(rng, 25);
        const BitSolution y = random_bits(rng, 25);
        BitSolution both(25), either(25);
        for (std::size_t i = 0; i < 25; ++i) {
            both.set(i, x[i] && y[i]);
            either.set(i, x[i] || y[i]);
        }
        const auto fx = evaluate(inst, x).objectives;
        const auto fy = evaluate(inst, y).objectives;
        const auto fo = evaluate(inst, either).objectives;
        const auto fa = evaluate(inst, both).objectives;
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_DOUBLE_EQ(fx[j] + fy[j], fo[j] + fa[j]);
        }
    }
}

TEST(Repair, WorkedExamples) {
    const SukpInstance inst = oracle::tiny_instance();
    EXPECT_EQ(repair(inst, BitSolution::from_string("011")).to_string(), "011");
    // Item 0 has the lowest profit per unique weight (10/3); items 1 and 2 share all their elements.
    EXPECT_EQ(repair(inst, BitSolution::from_string("111")).to_string(), "011");
    const BitSolution fixed = repair(inst, BitSolution::from_string("110"));
    EXPECT_TRUE(evaluate(inst, fixed).feasible);
    EXPECT_TRUE(fixed[0] || fixed[1]);
    EXPECT_FALSE(fixed[2]);
}

TEST(Repair, FeasibleSubsetAndIdempotent) {
    Rng rng(8);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SukpInstance inst = random_instance(seed + 100, 50, 50);
        for (int t = 0; t < 30; ++t) {
            const BitSolution x = random_bits(rng, 50);
            const BitSolution r = repair(inst, x);
            EXPECT_TRUE(evaluate(inst, r).feasible);
            for (std::size_t i = 0; i < 50; ++i) {
                EXPECT_TRUE(!r[i] || x[i]);
            }
            EXPECT_EQ(repair(inst, r), r);
            if (evaluate(inst, x).feasible) {
                EXPECT_EQ(r, x);
            }
        }
    }
}

TEST(Repair, ZeroCapacityEmptiesSolution) {
    const SukpInstance inst({{10, 6, 4}}, {3, 4, 5}, {{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}, 0);
    EXPECT_EQ(repair(inst, BitSolution::from_string("111")).to_string(), "000");
}

TEST(BruteForce, WorkedExampleTieBreak) {
    const SukpInstance inst = oracle::tiny_instance();
    const std::vector<double> w{1.0};
    const Optimum best = brute_force_optimum(inst, w);
    EXPECT_EQ(best.solution.to_string(), "011");
    EXPECT_EQ(best.fitness, 10.0);
}

TEST(BruteForce, ZeroAndFullCapacity) {
    const std::vector<double> w{1.0};
    const SukpInstance none({{10, 6, 4}}, {3, 4, 5}, {{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}, 0);
    EXPECT_EQ(brute_force_optimum(none, w).solution.to_string(), "000");
    EXPECT_EQ(brute_force_optimum(none, w).fitness, 0.0);
    const SukpInstance all({{10, 6, 4}}, {3, 4, 5}, {{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}, 12);
    EXPECT_EQ(brute_force_optimum(all, w).solution.to_string(), "111");
}

TEST(BruteForce, MatchesLexicographicOracle) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const SukpInstance inst = random_instance(seed + 40, 10, 8, 2);
        const std::vector<double> w{0.3, 0.7};
        const Optimum best = brute_force_optimum(inst, w);
        const auto ref = oracle::exhaustive_optimum(inst, w);
        EXPECT_EQ(best.solution.to_string(), ref.bits);
        EXPECT_DOUBLE_EQ(best.fitness, ref.fitness);
        EXPECT_TRUE(best.evaluation.feasible);
    }
}

TEST(BruteForce, GuardsLargeInstances) {
    const SukpInstance inst = random_instance(1, 25, 10);
    const std::vector<double> w{1.0};
    EXPECT_THROW(brute_force_optimum(inst, w), std::length_error);
}

TEST(Generator, Deterministic) {
    EXPECT_EQ(format_instance(random_instance(9, 30, 30)), format_instance(random_instance(9, 30, 30)));
    EXPECT_NE(format_instance(random_instance(9, 30, 30)), format_instance(random_instance(10, 30, 30)));
}

TEST(Generator, DensityOneAndFullCapacity) {
    Rng rng(1);
    GeneratorParams params;
    params.items = 8;
    params.elements = 6;
    params.density = 1.0;
    params.capacity_ratio = 1.0;
    const SukpInstance inst = generate_instance(rng, params);
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t e = 0; e < 6; ++e) {
            EXPECT_TRUE(inst.contains(i, e));
        }
    }
    EXPECT_TRUE(evaluate(inst, BitSolution::from_string("11111111")).feasible);
}

TEST(Generator, RejectsBadParameters) {
    Rng rng(1);
    GeneratorParams params;
    params.density = 0.0;
    EXPECT_THROW(generate_instance(rng, params), std::invalid_argument);
    params.density = 0.5;
    params.capacity_ratio = 1.5;
    EXPECT_THROW(generate_instance(rng, params), std::invalid_argument);
}

TEST(BitSolution, StringRoundTrip) {
    EXPECT_EQ(BitSolution::from_string("01101").to_string(), "01101");
    EXPECT_EQ(BitSolution::from_string("01101").count(), 3u);
    EXPECT_THROW(BitSolution::from_string("01x"), std::invalid_argument);
    EXPECT_EQ(hamming_distance(BitSolution::from_string("0110"), BitSolution::from_string("1100")), 2u);
}
