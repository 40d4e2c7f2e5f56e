#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "aos/error.hpp"
#include "aos/moo.hpp"
#include "oracles.hpp"

using namespace aos;

namespace {

std::set<std::vector<double>> contents(const ParetoArchive& archive) {
    std::set<std::vector<double>> out;
    for (const auto& e : archive.entries()) {
        out.insert(e.objectives);
    }
    return out;
}

BitSolution tag(std::size_t k) {
    BitSolution x(8);
    for (std::size_t b = 0; b < 8; ++b) {
        x.set(b, (k >> b) & 1U);
    }
    return x;
}

}  // namespace

TEST(Dominates, Examples) {
    EXPECT_TRUE(dominates(std::vector<double>{6, 5}, std::vector<double>{5, 3}));
    EXPECT_FALSE(dominates(std::vector<double>{5, 3}, std::vector<double>{3, 5}));
    EXPECT_FALSE(dominates(std::vector<double>{3, 5}, std::vector<double>{5, 3}));
    EXPECT_FALSE(dominates(std::vector<double>{4, 4}, std::vector<double>{4, 4}));
    EXPECT_THROW(dominates(std::vector<double>{1}, std::vector<double>{1, 2}), DimensionError);
}

TEST(Archive, Examples) {
    ParetoArchive a;
    EXPECT_TRUE(a.insert(tag(1), std::vector<double>{5, 3}));
    EXPECT_TRUE(a.insert(tag(2), std::vector<double>{4, 4}));
    EXPECT_TRUE(a.insert(tag(3), std::vector<double>{6, 5}));
    EXPECT_EQ(contents(a), (std::set<std::vector<double>>{{6, 5}}));

    ParetoArchive b;
    b.insert(tag(1), std::vector<double>{4, 4});
    EXPECT_TRUE(b.insert(tag(2), std::vector<double>{5, 3}));
    EXPECT_EQ(contents(b), (std::set<std::vector<double>>{{4, 4}, {5, 3}}));

    ParetoArchive c;
    c.insert(tag(1), std::vector<double>{4, 4});
    EXPECT_FALSE(c.insert(tag(2), std::vector<double>{4, 4}));
    EXPECT_EQ(c.size(), 1u);
}

TEST(Archive, MatchesQuadraticOracle) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        ParetoArchive archive(std::nullopt);
        std::vector<std::vector<double>> stream;
        const std::size_t objectives = 2 + rng.uniform_index(2);
        for (std::size_t k = 0; k < 200; ++k) {
            std::vector<double> p(objectives);
            for (auto& v : p) {
                v = static_cast<double>(rng.uniform_index(20));
            }
            stream.push_back(p);
            archive.insert(tag(k), p);
            for (const auto& x : archive.entries()) {
                for (const auto& y : archive.entries()) {
                    EXPECT_FALSE(dominates(x.objectives, y.objectives));
                }
            }
        }
        EXPECT_EQ(contents(archive), oracle::nondominated(stream));
    }
}

TEST(Archive, InsertionOrderIndependent) {
    Rng rng(3);
    std::vector<std::vector<double>> stream;
    for (int k = 0; k < 60; ++k) {
        stream.push_back({static_cast<double>(rng.uniform_index(15)), static_cast<double>(rng.uniform_index(15))});
    }
    ParetoArchive forward(std::nullopt), backward(std::nullopt);
    for (std::size_t k = 0; k < stream.size(); ++k) {
        forward.insert(tag(0), stream[k]);
        backward.insert(tag(0), stream[stream.size() - 1 - k]);
    }
    EXPECT_EQ(contents(forward), contents(backward));
}

TEST(Archive, CapacityEvictsMostCrowded) {
    ParetoArchive a(3);
    a.insert(tag(1), std::vector<double>{0, 10});
    a.insert(tag(2), std::vector<double>{10, 0});
    a.insert(tag(3), std::vector<double>{5, 5});
    a.insert(tag(4), std::vector<double>{5.5, 4.5});
    EXPECT_EQ(a.size(), 3u);
    const auto c = contents(a);
    EXPECT_TRUE(c.count({0, 10}) && c.count({10, 0}));
}

TEST(Archive, CsvExport) {
    ParetoArchive a;
    std::ostringstream empty;
    write_archive_csv(a, empty);
    EXPECT_EQ(empty.str(), "solution\n");
    a.insert(BitSolution::from_string("011"), std::vector<double>{10, 2.5});
    std::ostringstream out;
    write_archive_csv(a, out);
    EXPECT_EQ(out.str(), "solution,f0,f1\n011,10,2.5\n");
}
