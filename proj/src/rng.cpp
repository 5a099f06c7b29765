#include "pinlab/rng.hpp"

namespace pinlab {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) noexcept {
    return mix64(mix64(mix64(root) ^ stream) + index);
}

std::uint64_t stream_tag(const char* name) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (; *name; ++name) {
        h ^= static_cast<unsigned char>(*name);
        h *= 0x100000001b3ULL;
    }
    return h;
}

Engine make_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Engine(seq);
}

}  // namespace pinlab
