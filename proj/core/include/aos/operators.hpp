#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aos/problem.hpp"
#include "aos/rng.hpp"

namespace aos {

struct OperatorId {
    std::size_t value = 0;

    friend auto operator<=>(const OperatorId&, const OperatorId&) = default;
};

enum class OperatorKind {
    flip_one,   // "flip1"
    flip_k,     // "flipk:K"     flips K distinct bits (all of them when K >= m)
    best_mix,   // "bestmix:P"   each bit copied from the global best with probability P
    donor_mix,  // "donormix:P"  each bit copied from the donor with probability P
    exchange,   // "exchange"    one 1->0 and one 0->1; one-bit flip on constant vectors
};

struct OperatorSpec {
    OperatorKind kind = OperatorKind::flip_one;
    std::size_t k = 3;
    double p_mix = 0.3;

    /// Accepts the names listed on OperatorKind; throws ConfigError otherwise.
    static OperatorSpec parse(std::string_view text);
    std::string name() const;

    friend bool operator==(const OperatorSpec&, const OperatorSpec&) = default;
};

/// The three solutions an operator may read from.
struct MoveContext {
    const BitSolution& current;
    const BitSolution& global_best;
    const BitSolution& donor;
};

/// Ordered, non-empty list of move operators.
class OperatorPool {
public:
    /// Throws ConfigError when `specs` is empty.
    explicit OperatorPool(std::vector<OperatorSpec> specs);

    /// flip1, flipk:3, bestmix:0.3, exchange
    static OperatorPool default_pool();
    static OperatorPool parse(std::span<const std::string> names);

    std::size_t size() const noexcept { return specs_.size(); }
    const OperatorSpec& operator[](OperatorId id) const;
    std::span<const OperatorSpec> specs() const noexcept { return specs_; }
    std::vector<std::string> names() const;

    friend bool operator==(const OperatorPool&, const OperatorPool&) = default;

private:
    std::vector<OperatorSpec> specs_;
};

/// Produces a pre-repair neighbour of ctx.current. Throws DimensionError when
/// the context vectors differ in length.
BitSolution apply_operator(const OperatorSpec& spec, const MoveContext& ctx, Rng& rng);

/// Throws std::out_of_range for an id outside the pool.
BitSolution apply_operator(const OperatorPool& pool, OperatorId id, const MoveContext& ctx, Rng& rng);

}  // namespace aos
