#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <json.hpp>

#include "pinlab/rng.hpp"

namespace pinlab {

/// Σ_{n≥1} n^{-s} for s > 1: direct sum plus an Euler–Maclaurin tail.
double power_zeta(double s);

/// Σ_{n≥m} n^{-s} for s > 1 and m ≥ 1.
double power_zeta_tail(double s, std::size_t m);

/// Recurrent renewal with K(n) = c_K n^{-(1+α)}, tabulated on 1..n_max.
/// Immutable after construction except for the lazily filled mass table u(n),
/// which is safe to query from several threads.
class RenewalLaw {
public:
    double alpha() const noexcept { return alpha_; }
    double c_K() const noexcept { return c_k_; }
    std::size_t n_max() const noexcept { return n_max_; }
    double nu_pur() const noexcept;

    /// K(n) for 1 ≤ n ≤ n_max.
    double K(std::size_t n) const { return k_.at(n); }
    /// K̄(n) = P(τ₁ > n) for 0 ≤ n ≤ n_max.
    double Kbar(std::size_t n) const { return kbar_.at(n); }

    /// K indexed 0..n_max with K[0] = 0.
    std::span<const double> K_table() const noexcept { return k_; }
    std::span<const double> Kbar_table() const noexcept { return kbar_; }

    /// rev[j] = K(n_max - j) for j in [0, n_max). Lets the DP read K(n-m) for
    /// increasing m as a contiguous forward scan starting at rev + n_max - n.
    const double* K_reversed() const noexcept { return k_rev_.data(); }
    /// rev[j] = K̄(n_max - j) for j in [0, n_max].
    const double* Kbar_reversed() const noexcept { return kbar_rev_.data(); }

    /// u(n) = P(n ∈ τ), memoized prefix extension.
    double u(std::size_t n) const;

    /// Σ_{n ≤ n_max} n K(n).
    double truncated_mean() const;

    /// FNV-1a over the bytes of K(1..n_max).
    std::uint64_t checksum() const;
    nlohmann::json summary() const;

private:
    friend RenewalLaw build_renewal_law(double alpha, std::size_t n_max);

    struct MassCache {
        std::mutex mutex;
        std::vector<double> values;
        std::atomic<std::size_t> filled{0};
    };

    double alpha_ = 0.0;
    double c_k_ = 0.0;
    std::size_t n_max_ = 0;
    std::vector<double> k_;
    std::vector<double> kbar_;
    std::vector<double> k_rev_;
    std::vector<double> kbar_rev_;
    std::shared_ptr<MassCache> mass_;
};

RenewalLaw build_renewal_law(double alpha, std::size_t n_max);

/// u(n) with a range check.
double renewal_mass(const RenewalLaw& law, std::size_t n);

/// One gap from the full law; values above n_max come back as n_max + 1.
std::size_t sample_gap(const RenewalLaw& law, Engine& eng);

/// Contact set {0, τ₁, τ₂, ...} ∩ [0, horizon], sorted.
std::vector<std::size_t> sample_renewal(const RenewalLaw& law, std::size_t horizon, std::uint64_t seed);

}  // namespace pinlab
