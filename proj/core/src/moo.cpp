#include "aos/moo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aos/error.hpp"
#include "aos/format.hpp"

namespace aos {

bool dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("dominates: objective vectors differ in length");
    }
    bool strict = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] < b[j]) {
            return false;
        }
        strict = strict || a[j] > b[j];
    }
    return strict;
}

ParetoArchive::ParetoArchive(std::optional<std::size_t> capacity) : capacity_(capacity) {
    if (capacity_ && *capacity_ == 0) {
        throw std::invalid_argument("archive capacity must be positive");
    }
}

namespace {

bool entry_less(const ArchiveEntry& a, const ArchiveEntry& b) {
    if (a.objectives != b.objectives) {
        return a.objectives < b.objectives;
    }
    return a.solution < b.solution;
}

}  // namespace

bool ParetoArchive::insert(const BitSolution& solution, std::span<const double> objectives) {
    for (const auto& e : entries_) {
        if (e.objectives.size() != objectives.size()) {
            throw DimensionError("archive_insert: objective count differs from archive entries");
        }
        if (dominates(e.objectives, objectives) ||
            std::equal(e.objectives.begin(), e.objectives.end(), objectives.begin())) {
            return false;
        }
    }
    std::erase_if(entries_, [&](const ArchiveEntry& e) { return dominates(objectives, e.objectives); });
    ArchiveEntry entry{solution, std::vector<double>(objectives.begin(), objectives.end())};
    entries_.insert(std::upper_bound(entries_.begin(), entries_.end(), entry, entry_less), std::move(entry));
    if (capacity_ && entries_.size() > *capacity_) {
        evict_most_crowded();
    }
    return true;
}

void ParetoArchive::evict_most_crowded() {
    const std::size_t count = entries_.size();
    const std::size_t dims = entries_.front().objectives.size();
    std::vector<double> lo(dims, std::numeric_limits<double>::infinity());
    std::vector<double> hi(dims, -std::numeric_limits<double>::infinity());
    for (const auto& e : entries_) {
        for (std::size_t j = 0; j < dims; ++j) {
            lo[j] = std::min(lo[j], e.objectives[j]);
            hi[j] = std::max(hi[j], e.objectives[j]);
        }
    }
    auto distance = [&](const ArchiveEntry& a, const ArchiveEntry& b) {
        double sq = 0.0;
        for (std::size_t j = 0; j < dims; ++j) {
            const double range = hi[j] > lo[j] ? hi[j] - lo[j] : 1.0;
            const double d = (a.objectives[j] - b.objectives[j]) / range;
            sq += d * d;
        }
        return std::sqrt(sq);
    };
    // Entries are sorted, so the first minimum is a deterministic choice.
    std::size_t victim = 0;
    double victim_nn = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < count; ++a) {
        double nn = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < count; ++b) {
            if (a != b) {
                nn = std::min(nn, distance(entries_[a], entries_[b]));
            }
        }
        if (nn < victim_nn) {
            victim_nn = nn;
            victim = a;
        }
    }
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
}

void write_archive_csv(const ParetoArchive& archive, std::ostream& out) {
    out << "solution";
    const std::size_t dims = archive.empty() ? 0 : archive.entries().front().objectives.size();
    for (std::size_t j = 0; j < dims; ++j) {
        out << ",f" << j;
    }
    out << '\n';
    for (const auto& e : archive.entries()) {
        out << e.solution.to_string();
        for (double v : e.objectives) {
            out << ',' << format_double(v);
        }
        out << '\n';
    }
}

}  // namespace aos
