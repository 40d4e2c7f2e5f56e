#include "aos/operators.hpp"

#include <stdexcept>

#include "aos/error.hpp"
#include "aos/format.hpp"

namespace aos {

OperatorSpec OperatorSpec::parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    auto bad = [&](const std::string& why) {
        return ConfigError("invalid operator '" + std::string(text) + "': " + why +
                           " (valid: flip1, flipk:K, bestmix:P, donormix:P, exchange)");
    };
    auto probability = [&](double fallback) {
        if (colon == std::string_view::npos) {
            return fallback;
        }
        double p = 0.0;
        try {
            p = parse_double(arg);
        } catch (const std::invalid_argument&) {
            throw bad("mixing probability is not a number");
        }
        if (!(p >= 0.0 && p <= 1.0)) {
            throw bad("mixing probability must lie in [0, 1]");
        }
        return p;
    };

    OperatorSpec spec;
    if (head == "flip1" || head == "exchange") {
        if (colon != std::string_view::npos) {
            throw bad("takes no parameter");
        }
        spec.kind = head == "flip1" ? OperatorKind::flip_one : OperatorKind::exchange;
    } else if (head == "flipk") {
        spec.kind = OperatorKind::flip_k;
        if (colon != std::string_view::npos) {
            double k = 0.0;
            try {
                k = parse_double(arg);
            } catch (const std::invalid_argument&) {
                throw bad("K is not a number");
            }
            if (k < 1.0 || k != static_cast<double>(static_cast<std::size_t>(k))) {
                throw bad("K must be a positive integer");
            }
            spec.k = static_cast<std::size_t>(k);
        }
    } else if (head == "bestmix") {
        spec.kind = OperatorKind::best_mix;
        spec.p_mix = probability(0.3);
    } else if (head == "donormix") {
        spec.kind = OperatorKind::donor_mix;
        spec.p_mix = probability(0.3);
    } else {
        throw bad("unknown operator");
    }
    return spec;
}

std::string OperatorSpec::name() const {
    switch (kind) {
    case OperatorKind::flip_one: return "flip1";
    case OperatorKind::flip_k: return "flipk:" + std::to_string(k);
    case OperatorKind::best_mix: return "bestmix:" + format_double(p_mix);
    case OperatorKind::donor_mix: return "donormix:" + format_double(p_mix);
    case OperatorKind::exchange: return "exchange";
    }
    return "unknown";
}

OperatorPool::OperatorPool(std::vector<OperatorSpec> specs) : specs_(std::move(specs)) {
    if (specs_.empty()) {
        throw ConfigError("operator pool must contain at least one operator");
    }
}

OperatorPool OperatorPool::default_pool() {
    return OperatorPool({
        {OperatorKind::flip_one, 3, 0.3},
        {OperatorKind::flip_k, 3, 0.3},
        {OperatorKind::best_mix, 3, 0.3},
        {OperatorKind::exchange, 3, 0.3},
    });
}

OperatorPool OperatorPool::parse(std::span<const std::string> names) {
    std::vector<OperatorSpec> specs;
    specs.reserve(names.size());
    for (const auto& name : names) {
        specs.push_back(OperatorSpec::parse(name));
    }
    return OperatorPool(std::move(specs));
}

const OperatorSpec& OperatorPool::operator[](OperatorId id) const {
    if (id.value >= specs_.size()) {
        throw std::out_of_range("operator id " + std::to_string(id.value) + " outside pool of size " +
                                std::to_string(specs_.size()));
    }
    return specs_[id.value];
}

std::vector<std::string> OperatorPool::names() const {
    std::vector<std::string> out;
    out.reserve(specs_.size());
    for (const auto& s : specs_) {
        out.push_back(s.name());
    }
    return out;
}

namespace {

void flip_random(BitSolution& x, Rng& rng) { x.flip(rng.uniform_index(x.size())); }

// Partial Fisher-Yates: flips min(k, m) distinct positions.
void flip_distinct(BitSolution& x, std::size_t k, Rng& rng) {
    const std::size_t m = x.size();
    k = std::min(k, m);
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) {
        idx[i] = i;
    }
    for (std::size_t t = 0; t < k; ++t) {
        const std::size_t pick = t + rng.uniform_index(m - t);
        std::swap(idx[t], idx[pick]);
        x.flip(idx[t]);
    }
}

void mix_from(BitSolution& x, const BitSolution& source, double p, Rng& rng) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (rng.bernoulli(p)) {
            x.set(i, source[i]);
        }
    }
}

void exchange(BitSolution& x, Rng& rng) {
    const std::size_t ones = x.count();
    const std::size_t zeros = x.size() - ones;
    if (ones == 0 || zeros == 0) {
        flip_random(x, rng);
        return;
    }
    auto nth_with_value = [&x](std::size_t nth, bool value) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == value && nth-- == 0) {
                return i;
            }
        }
        return x.size();
    };
    const std::size_t out = nth_with_value(rng.uniform_index(ones), true);
    const std::size_t in = nth_with_value(rng.uniform_index(zeros), false);
    x.set(out, false);
    x.set(in, true);
}

}  // namespace

BitSolution apply_operator(const OperatorSpec& spec, const MoveContext& ctx, Rng& rng) {
    const std::size_t m = ctx.current.size();
    if (ctx.global_best.size() != m || ctx.donor.size() != m) {
        throw DimensionError("apply_operator: context solutions differ in length");
    }
    BitSolution next = ctx.current;
    if (m == 0) {
        return next;
    }
    switch (spec.kind) {
    case OperatorKind::flip_one: flip_random(next, rng); break;
    case OperatorKind::flip_k: flip_distinct(next, spec.k, rng); break;
    case OperatorKind::best_mix: mix_from(next, ctx.global_best, spec.p_mix, rng); break;
    case OperatorKind::donor_mix: mix_from(next, ctx.donor, spec.p_mix, rng); break;
    case OperatorKind::exchange: exchange(next, rng); break;
    }
    return next;
}

BitSolution apply_operator(const OperatorPool& pool, OperatorId id, const MoveContext& ctx, Rng& rng) {
    return apply_operator(pool[id], ctx, rng);
}

}  // namespace aos
