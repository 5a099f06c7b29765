#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "pinlab/environment.hpp"
#include "pinlab/partition.hpp"

// Slow reference computations written without the library's transfer
// matrices or tables. For tests and the claim harness only.
namespace pinlab::oracle {

/// n^{-(1+α)} / ζ(1+α).
double K(double alpha, std::size_t n);
/// 1 - Σ_{k≤n} K(k).
double Kbar(double alpha, std::size_t n);

/// log Z over all 2^N contact subsets of {1..N}, N ≤ 20.
double brute_force_log_partition(double alpha, std::span<const std::int8_t> sites, const PinningParams& params,
                                 bool free_boundary = true);

/// P(ω_1..ω_N = pattern) given ω_0 = +1 opening a fresh attractive stretch.
double pattern_probability(const GeneratorSpec& spec, std::span<const std::int8_t> pattern);

/// log E Z by summing over environments and contact subsets jointly, N ≤ 12.
double brute_force_annealed_log_partition(double alpha, const GeneratorSpec& spec, const PinningParams& params,
                                          std::size_t N);

/// Cov(sign W_0, sign W_k) for unit Gaussians with correlation ρ.
double arcsine_covariance(double rho);

/// Leading constant of F(h) as h ↓ 0: F ~ C h^{1/α} for α < 1, F ~ h/μ for α > 1.
double homogeneous_prefactor(double alpha);

}  // namespace pinlab::oracle
