#include "aos/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace aos {

std::string_view to_string(RankSumDirection direction) {
    switch (direction) {
    case RankSumDirection::a_greater: return "a_greater";
    case RankSumDirection::b_greater: return "b_greater";
    case RankSumDirection::equal: return "equal";
    }
    return "equal";
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && values[order[j]] == values[order[i]]) {
            ++j;
        }
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) {
            ranks[order[t]] = rank;
        }
        i = j;
    }
    return ranks;
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

namespace {

// Two-sided exact p over doubled midranks, which are integers.
double exact_p(const std::vector<long>& doubled, std::size_t n1, long observed) {
    const std::size_t n = doubled.size();
    const long total = std::accumulate(doubled.begin(), doubled.end(), 0L);
    // counts[k][s]: subsets of size k with doubled rank sum s.
    std::vector<std::vector<double>> counts(n1 + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
    counts[0][0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<std::size_t>(doubled[i]);
        for (std::size_t k = std::min(n1, i + 1); k >= 1; --k) {
            for (std::size_t s = static_cast<std::size_t>(total); s >= r; --s) {
                counts[k][s] += counts[k - 1][s - r];
            }
        }
    }
    // Mean of the doubled sum is n1 * (n + 1); compare doubled deviations.
    const long mean2 = static_cast<long>(n1) * static_cast<long>(n + 1);
    const long dev_obs = std::labs(observed - mean2);
    double extreme = 0.0;
    double all = 0.0;
    for (std::size_t s = 0; s <= static_cast<std::size_t>(total); ++s) {
        all += counts[n1][s];
        if (std::labs(static_cast<long>(s) - mean2) >= dev_obs) {
            extreme += counts[n1][s];
        }
    }
    return extreme / all;
}

double normal_p(const std::vector<double>& ranks, std::size_t n1, std::size_t n2, double u_a) {
    const double n = static_cast<double>(n1 + n2);
    std::vector<double> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double a = static_cast<double>(n1);
    const double b = static_cast<double>(n2);
    const double variance = a * b / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (!(variance > 0.0)) {
        return 1.0;
    }
    const double deviation = std::max(0.0, std::abs(u_a - a * b / 2.0) - 0.5);
    const double z = deviation / std::sqrt(variance);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

}  // namespace

RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 3 || b.size() < 3) {
        throw std::invalid_argument("wilcoxon_rank_sum needs at least three values per sample");
    }
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    if (std::any_of(pooled.begin(), pooled.end(), [](double v) { return std::isnan(v); })) {
        throw std::invalid_argument("wilcoxon_rank_sum: sample contains NaN");
    }
    const std::vector<double> ranks = average_ranks(pooled);
    const std::size_t n1 = a.size();
    const std::size_t n2 = b.size();

    RankSumResult result;
    result.rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n1), 0.0);
    result.u_a = result.rank_sum_a - static_cast<double>(n1 * (n1 + 1)) / 2.0;
    const double half = static_cast<double>(n1 * n2) / 2.0;
    result.direction = result.u_a > half   ? RankSumDirection::a_greater
                       : result.u_a < half ? RankSumDirection::b_greater
                                           : RankSumDirection::equal;

    if (n1 + n2 <= kExactRankSumMaxTotal) {
        std::vector<long> doubled(ranks.size());
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            doubled[i] = std::lround(2.0 * ranks[i]);
        }
        const long observed = std::accumulate(doubled.begin(), doubled.begin() + static_cast<std::ptrdiff_t>(n1), 0L);
        result.p_value = exact_p(doubled, n1, observed);
        result.exact = true;
    } else {
        result.p_value = normal_p(ranks, n1, n2, result.u_a);
    }
    return result;
}

}  // namespace aos
