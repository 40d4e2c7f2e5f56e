#include <gtest/gtest.h>

#include <cmath>

#include "aos/rng.hpp"
#include "aos/stats.hpp"
#include "oracles.hpp"

using namespace aos;

TEST(RankSum, WorkedExamples) {
    const auto r = wilcoxon_rank_sum(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6});
    EXPECT_EQ(r.u_a, 0.0);
    EXPECT_EQ(r.p_value, 0.1);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.direction, RankSumDirection::b_greater);

    const auto s = wilcoxon_rank_sum(std::vector<double>{1, 2, 3, 4}, std::vector<double>{5, 6, 7, 8});
    EXPECT_EQ(s.u_a, 0.0);
    EXPECT_DOUBLE_EQ(s.p_value, 2.0 / 70.0);
}

TEST(RankSum, IdenticalSamples) {
    const std::vector<double> a{3, 1, 4, 1, 5};
    const auto r = wilcoxon_rank_sum(a, a);
    EXPECT_NEAR(r.p_value, 1.0, 1e-12);
    EXPECT_EQ(r.direction, RankSumDirection::equal);
    const std::vector<double> big(20, 2.0);
    EXPECT_NEAR(wilcoxon_rank_sum(big, big).p_value, 1.0, 1e-12);
}

TEST(RankSum, TooSmall) {
    EXPECT_THROW(wilcoxon_rank_sum(std::vector<double>{1, 2}, std::vector<double>{3, 4, 5}), std::invalid_argument);
    EXPECT_THROW(wilcoxon_rank_sum(std::vector<double>{1, 2, NAN}, std::vector<double>{3, 4, 5}),
                 std::invalid_argument);
}

TEST(RankSum, ExactMatchesEnumerationOracle) {
    Rng rng(1);
    for (std::size_t n1 = 3; n1 <= 7; ++n1) {
        for (std::size_t n2 = 3; n1 + n2 <= 10; ++n2) {
            for (int trial = 0; trial < 25; ++trial) {
                std::vector<double> a(n1), b(n2);
                // Small integer range forces ties.
                for (auto& v : a) v = static_cast<double>(rng.uniform_index(6));
                for (auto& v : b) v = static_cast<double>(rng.uniform_index(6));
                const auto r = wilcoxon_rank_sum(a, b);
                ASSERT_TRUE(r.exact);
                EXPECT_NEAR(r.p_value, oracle::rank_sum_enumeration_p(a, b), 1e-12)
                    << "n1=" << n1 << " n2=" << n2 << " trial=" << trial;
            }
        }
    }
}

TEST(RankSum, ExactUpToSixteen) {
    std::vector<double> a, b;
    for (int i = 0; i < 8; ++i) {
        a.push_back(i);
        b.push_back(i + 100);
    }
    const auto r = wilcoxon_rank_sum(a, b);
    EXPECT_TRUE(r.exact);
    EXPECT_DOUBLE_EQ(r.p_value, 2.0 / 12870.0);
    a.push_back(50);
    EXPECT_FALSE(wilcoxon_rank_sum(a, b).exact);
}

TEST(RankSum, NormalApproximation) {
    std::vector<double> a, b;
    for (int i = 0; i < 10; ++i) {
        a.push_back(i);
        b.push_back(i + 10);
    }
    const auto r = wilcoxon_rank_sum(a, b);
    EXPECT_FALSE(r.exact);
    // U = 0, mu = 50, sigma^2 = 100 * 21 / 12 = 175, z = 49.5 / sqrt(175).
    EXPECT_NEAR(r.p_value, std::erfc(49.5 / std::sqrt(175.0) / std::sqrt(2.0)), 1e-12);
    EXPECT_EQ(r.direction, RankSumDirection::b_greater);
    EXPECT_EQ(wilcoxon_rank_sum(b, a).direction, RankSumDirection::a_greater);
}

TEST(AverageRanks, Ties) {
    EXPECT_EQ(average_ranks(std::vector<double>{10, 7, 7}), (std::vector<double>{3, 1.5, 1.5}));
    EXPECT_EQ(average_ranks(std::vector<double>{}), std::vector<double>{});
}

TEST(Median, OddEven) {
    EXPECT_EQ(median({3, 1, 2}), 2.0);
    EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
    EXPECT_THROW(median({}), std::invalid_argument);
}
