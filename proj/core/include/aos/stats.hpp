#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace aos {

enum class RankSumDirection { a_greater, b_greater, equal };

std::string_view to_string(RankSumDirection direction);

struct RankSumResult {
    double u_a = 0.0;       // Mann-Whitney U of sample a
    double rank_sum_a = 0.0;
    double p_value = 1.0;   // two-sided
    RankSumDirection direction = RankSumDirection::equal;
    bool exact = false;
};

/// Samples with |a| + |b| up to this size get the exact null distribution.
inline constexpr std::size_t kExactRankSumMaxTotal = 16;

/// Wilcoxon rank-sum test.
///
/// Ties receive midranks. The exact p counts every split of the pooled ranks
/// into groups of |a| and |b| whose rank sum lies at least as far from its
/// mean as the observed one. Larger samples use the normal approximation
/// with tie and continuity correction. `direction` tells which sample ranks
/// higher on average. Throws std::invalid_argument when a sample has fewer
/// than three values or contains NaN.
RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

/// Ascending ranks starting at 1; tied values share their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Median of a non-empty sample (mean of the two middle values for even size).
double median(std::vector<double> values);

}  // namespace aos
