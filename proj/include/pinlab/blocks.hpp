#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pinlab/environment.hpp"

namespace pinlab {

/// Segmentation of ω into maximal constant runs. T[k] is the index where
/// run k+1 starts (T[0] = 0 is the origin, where ω_{-1} = -1 and ω_0 = +1),
/// so block k covers [T[k-1], T[k]) and has size xi[k-1] = T[k] - T[k-1].
/// Odd blocks (k = 1, 3, ...) are the attractive ones.
struct BlockDecomposition {
    std::vector<std::size_t> T{0};
    std::vector<std::size_t> xi;
    /// Length of the trailing run that is not closed inside the sample.
    std::size_t open_length = 0;
    bool open_attractive = true;

    std::size_t blocks() const noexcept { return xi.size(); }
    std::size_t covered() const noexcept { return T.back(); }
};

BlockDecomposition decompose_blocks(const BinaryEnvironment& env);
BlockDecomposition decompose_blocks(std::span<const std::int8_t> omega);

/// Values on [0, T_last) rebuilt from the decomposition.
std::vector<std::int8_t> reconstruct(const BlockDecomposition& dec);

/// 𝒯_k(A): T of the k-th attractive block of size ≥ A (its end index).
std::optional<std::size_t> first_A_block(const BlockDecomposition& dec, std::size_t A, std::size_t k = 1);

/// inf{A : log 𝒯₁(A) < δ A} over realized attractive sizes.
std::optional<std::size_t> a_delta(const BlockDecomposition& dec, double delta);

}  // namespace pinlab
