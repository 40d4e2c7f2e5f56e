#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "aos/problem.hpp"

namespace aos {

/// Maximization dominance: a >= b everywhere and a > b somewhere.
/// Throws DimensionError on length mismatch.
bool dominates(std::span<const double> a, std::span<const double> b);

struct ArchiveEntry {
    BitSolution solution;
    std::vector<double> objectives;

    friend bool operator==(const ArchiveEntry&, const ArchiveEntry&) = default;
};

/// Set of mutually non-dominated objective vectors (maximization).
///
/// Entries are kept sorted by objective vector, so the contents do not depend
/// on insertion order except through capacity eviction. When an insertion
/// overflows the capacity, the entry with the smallest nearest-neighbour
/// distance in range-normalized objective space is evicted.
class ParetoArchive {
public:
    static constexpr std::size_t kDefaultCapacity = 100;

    explicit ParetoArchive(std::optional<std::size_t> capacity = kDefaultCapacity);

    /// Rejects the candidate when an entry dominates or equals it; otherwise
    /// removes the entries it dominates and inserts it. Returns acceptance.
    bool insert(const BitSolution& solution, std::span<const double> objectives);

    std::span<const ArchiveEntry> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::optional<std::size_t> capacity() const noexcept { return capacity_; }

    friend bool operator==(const ParetoArchive&, const ParetoArchive&) = default;

private:
    void evict_most_crowded();

    std::optional<std::size_t> capacity_;
    std::vector<ArchiveEntry> entries_;
};

/// Header `solution,f0,f1,...`, then one row per entry.
void write_archive_csv(const ParetoArchive& archive, std::ostream& out);

}  // namespace aos
