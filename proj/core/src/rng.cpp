#include "aos/rng.hpp"

namespace aos {

__extension__ using u128 = unsigned __int128;

std::size_t Rng::uniform_index(std::size_t n) {
    // Lemire's nearly-divisionless bounded draw.
    const std::uint64_t range = n;
    std::uint64_t x = engine_();
    u128 product = static_cast<u128>(x) * range;
    auto low = static_cast<std::uint64_t>(product);
    if (low < range) {
        const std::uint64_t threshold = (0 - range) % range;
        while (low < threshold) {
            x = engine_();
            product = static_cast<u128>(x) * range;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::size_t>(product >> 64);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace aos
