#include "pinlab/blocks.hpp"

#include <cmath>
#include <stdexcept>

namespace pinlab {

BlockDecomposition decompose_blocks(std::span<const std::int8_t> omega) {
    if (omega.empty()) throw std::invalid_argument("decompose_blocks: empty environment");
    if (omega[0] != 1) throw std::invalid_argument("decompose_blocks: omega[0] must be +1");
    BlockDecomposition dec;
    for (std::size_t i = 1; i < omega.size(); ++i) {
        if (omega[i] != omega[i - 1]) {
            dec.xi.push_back(i - dec.T.back());
            dec.T.push_back(i);
        }
    }
    dec.open_length = omega.size() - dec.T.back();
    dec.open_attractive = dec.xi.size() % 2 == 0;
    return dec;
}

BlockDecomposition decompose_blocks(const BinaryEnvironment& env) {
    return decompose_blocks(std::span<const std::int8_t>(env.omega));
}

std::vector<std::int8_t> reconstruct(const BlockDecomposition& dec) {
    std::vector<std::int8_t> out;
    out.reserve(dec.covered());
    for (std::size_t k = 0; k < dec.xi.size(); ++k) out.insert(out.end(), dec.xi[k], k % 2 == 0 ? 1 : -1);
    return out;
}

std::optional<std::size_t> first_A_block(const BlockDecomposition& dec, std::size_t A, std::size_t k) {
    if (A == 0) throw std::invalid_argument("first_A_block: A must be >= 1");
    if (k == 0) throw std::invalid_argument("first_A_block: k must be >= 1");
    std::size_t seen = 0;
    for (std::size_t b = 0; b < dec.xi.size(); b += 2) {
        if (dec.xi[b] >= A && ++seen == k) return dec.T[b + 1];
    }
    return std::nullopt;
}

std::optional<std::size_t> a_delta(const BlockDecomposition& dec, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("a_delta: delta must be positive");
    // 𝒯₁(A) is constant on (previous record, current record] of the running
    // maximum of attractive sizes, equal to the T closing the record block.
    std::size_t record = 0;
    for (std::size_t b = 0; b < dec.xi.size(); b += 2) {
        if (dec.xi[b] <= record) continue;
        const double t = static_cast<double>(dec.T[b + 1]);
        const double bound = std::log(t) / delta;  // need A > bound
        const std::size_t candidate = std::max(record + 1, static_cast<std::size_t>(std::floor(bound)) + 1);
        if (candidate <= dec.xi[b]) return candidate;
        record = dec.xi[b];
    }
    return std::nullopt;
}

}  // namespace pinlab
