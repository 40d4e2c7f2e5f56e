#include <gtest/gtest.h>

#include <numeric>

#include "aos/error.hpp"
#include "aos/selection.hpp"

using namespace aos;

namespace {

CreditView column(std::vector<double> values) {
    CreditView view(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        view(i, 0) = values[i];
    }
    return view;
}

SchemeParams greedy() {
    SchemeParams p;
    p.epsilon = 0.0;
    return p;
}

void expect_simplex(const SchemeState& s, double p_min) {
    const auto p = s.probabilities();
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    for (double v : p) {
        EXPECT_GE(v, p_min - 1e-12);
    }
}

}  // namespace

TEST(Weights, Validation) {
    EXPECT_NO_THROW(WeightVector({0.25, 0.75}));
    EXPECT_THROW(WeightVector({0.5, 0.6}), ConfigError);
    EXPECT_THROW(WeightVector({-0.5, 1.5}), ConfigError);
    EXPECT_THROW(WeightVector({}), ConfigError);
    EXPECT_EQ(WeightVector::unit(3, 1).values()[1], 1.0);
    const WeightVector u = WeightVector::uniform(7);
    EXPECT_NEAR(std::accumulate(u.values().begin(), u.values().end(), 0.0), 1.0, 1e-12);
}

TEST(Scheme, NamesAndParams) {
    EXPECT_EQ(parse_scheme("ucb"), SchemeKind::ucb);
    EXPECT_THROW(parse_scheme("bogus"), ConfigError);
    try {
        parse_scheme("bogus");
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("random, pm, ap, ucb, rl"), std::string::npos);
    }
    EXPECT_THROW(SchemeState(SchemeKind::pm, 0), ConfigError);
    SchemeParams p;
    p.p_min = 0.3;
    EXPECT_THROW(SchemeState(SchemeKind::pm, 4, p), ConfigError);
    p.p_min = 0.05;
    p.ucb_c = 0.0;
    EXPECT_THROW(SchemeState(SchemeKind::ucb, 4, p), ConfigError);
}

TEST(Rl, Argmax) {
    const SchemeState s(SchemeKind::rl, 3, greedy());
    Rng rng(1);
    EXPECT_EQ(select_operator(s, column({0.2, 0.9, 0.5}), WeightVector::uniform(1), rng).value, 1u);
}

TEST(Rl, WeightReduction) {
    const SchemeState s(SchemeKind::rl, 2, greedy());
    CreditView view(2, 2);
    view(0, 0) = 0.2;
    view(1, 0) = 0.9;
    view(0, 1) = 0.9;
    view(1, 1) = 0.1;
    Rng rng(2);
    EXPECT_EQ(select_operator(s, view, WeightVector({1.0, 0.0}), rng).value, 1u);
    EXPECT_EQ(select_operator(s, view, WeightVector({0.0, 1.0}), rng).value, 0u);
}

TEST(Rl, ScaleInvarianceAndTies) {
    const SchemeState s(SchemeKind::rl, 4, greedy());
    Rng values(3);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> c(4);
        for (auto& v : c) {
            v = values.uniform01();
        }
        std::vector<double> scaled = c;
        for (auto& v : scaled) {
            v *= 7.5;
        }
        Rng a(t), b(t);
        EXPECT_EQ(select_operator(s, column(c), WeightVector::uniform(1), a),
                  select_operator(s, column(scaled), WeightVector::uniform(1), b));
    }
    std::vector<int> hits(4, 0);
    Rng rng(4);
    for (int t = 0; t < 4000; ++t) {
        ++hits[select_operator(s, column({0.5, 0.9, 0.9, 0.1}), WeightVector::uniform(1), rng).value];
    }
    EXPECT_EQ(hits[0] + hits[3], 0);
    EXPECT_NEAR(hits[1] / 4000.0, 0.5, 0.05);
}

TEST(Rl, DimensionMismatch) {
    const SchemeState s(SchemeKind::rl, 3, greedy());
    Rng rng(5);
    EXPECT_THROW(select_operator(s, column({1, 2}), WeightVector::uniform(1), rng), DimensionError);
    EXPECT_THROW(select_operator(s, column({1, 2, 3}), WeightVector::uniform(2), rng), DimensionError);
}

TEST(Rl, UpdateIsNoop) {
    SchemeState s(SchemeKind::rl, 3);
    const SchemeState before = s;
    update_scheme(s, OperatorId{1}, 1.0);
    EXPECT_EQ(s, before);
}

TEST(Pm, EqualQualityUniform) {
    SchemeState s(SchemeKind::pm, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        update_scheme(s, OperatorId{i}, 1.0);
    }
    for (double p : s.probabilities()) {
        EXPECT_NEAR(p, 0.25, 1e-12);
    }
}

TEST(Pm, HandSubstitution) {
    SchemeParams p;
    p.alpha = 1.0;
    SchemeState s(SchemeKind::pm, 4, p);
    update_scheme(s, OperatorId{0}, 1.0);
    const auto probs = s.probabilities();
    EXPECT_NEAR(probs[0], 0.85, 1e-12);
    for (std::size_t i = 1; i < 4; ++i) {
        EXPECT_NEAR(probs[i], 0.05, 1e-12);
    }
}

TEST(Ap, PursuitLimit) {
    SchemeState s(SchemeKind::ap, 4);
    double previous = s.probabilities()[0];
    for (int t = 0; t < 30; ++t) {
        update_scheme(s, OperatorId{0}, 1.0);
        EXPECT_GE(s.probabilities()[0], previous);
        previous = s.probabilities()[0];
    }
    EXPECT_NEAR(s.probabilities()[0], 1.0 - 3 * 0.05, 1e-9);
    for (std::size_t i = 1; i < 4; ++i) {
        EXPECT_NEAR(s.probabilities()[i], 0.05, 1e-9);
    }
}

TEST(ProbabilitySimplex, RandomRewardStreams) {
    for (auto kind : {SchemeKind::pm, SchemeKind::ap}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Rng rng(seed);
            SchemeParams p;
            p.p_min = 0.02 + 0.2 * rng.uniform01() / 5.0;
            p.alpha = rng.uniform01();
            p.pursuit_rate = rng.uniform01();
            const std::size_t k = 2 + rng.uniform_index(5);
            SchemeState s(kind, k, p);
            for (int t = 0; t < 300; ++t) {
                update_scheme(s, OperatorId{rng.uniform_index(k)}, rng.bernoulli(0.3) ? rng.uniform01() : 0.0);
                expect_simplex(s, p.p_min);
            }
        }
    }
}

TEST(Ucb, UnpulledFirstThenHandExample) {
    SchemeState s(SchemeKind::ucb, 2);
    Rng rng(6);
    const OperatorId first = select_operator(s, CreditView(0, 0), WeightVector::uniform(1), rng);
    update_scheme(s, first, first.value == 0 ? 1.0 : 0.0);
    const OperatorId second = select_operator(s, CreditView(0, 0), WeightVector::uniform(1), rng);
    EXPECT_NE(first, second);
    update_scheme(s, second, second.value == 0 ? 1.0 : 0.0);
    EXPECT_EQ(s.pull_counts()[0], 1u);
    EXPECT_EQ(s.pull_counts()[1], 1u);
    // Equal exploration bonus; q-hat (0.1, 0) decides.
    EXPECT_EQ(select_operator(s, CreditView(0, 0), WeightVector::uniform(1), rng).value, 0u);
}

TEST(Update, InvalidOperator) {
    SchemeState s(SchemeKind::pm, 3);
    EXPECT_THROW(update_scheme(s, OperatorId{3}, 1.0), std::out_of_range);
}

TEST(Random, RoughlyUniform) {
    const SchemeState s(SchemeKind::random, 4);
    Rng rng(7);
    std::vector<int> hits(4, 0);
    for (int t = 0; t < 8000; ++t) {
        ++hits[select_operator(s, CreditView(0, 0), WeightVector::uniform(1), rng).value];
    }
    for (int h : hits) {
        EXPECT_NEAR(h / 8000.0, 0.25, 0.03);
    }
}
