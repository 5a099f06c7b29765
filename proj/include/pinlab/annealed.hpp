#pragma once

#include <cstddef>
#include <cstdint>

#include "pinlab/environment.hpp"
#include "pinlab/partition.hpp"
#include "pinlab/renewal.hpp"

namespace pinlab {

enum class AnnealedMode {
    automatic,    ///< exact where cheap (IID, Markov), Monte Carlo otherwise
    monte_carlo,
    exact,        ///< closed form (IID) or joint state transfer (Markov, block)
    enumeration   ///< sum over all 2^N environment prefixes, N ≤ 14
};

/// (1/N) log E Z. Exact modes report stderr 0.
FreeEnergyEstimate annealed_estimate(const RenewalLaw& law, const GeneratorSpec& spec, const PinningParams& params,
                                     std::size_t N, std::size_t samples, std::uint64_t seed,
                                     AnnealedMode mode = AnnealedMode::automatic, unsigned workers = 1);

/// μ̂ = -(1/N) log of the sample mean of 1/Z.
FreeEnergyEstimate inverse_partition_estimate(const RenewalLaw& law, const GeneratorSpec& spec,
                                              const PinningParams& params, std::size_t N, std::size_t samples,
                                              std::uint64_t seed, unsigned workers = 1);

/// log E Z through the finite-state environment chain (Markov: two states;
/// block: sign and age, N ≤ 64).
double annealed_log_partition_state(const RenewalLaw& law, const GeneratorSpec& spec, const PinningParams& params,
                                    std::size_t N);

/// log E Z by summing prefix probability × quenched Z over all environments.
double annealed_log_partition_enumerated(const RenewalLaw& law, const GeneratorSpec& spec, const PinningParams& params,
                                         std::size_t N);

/// E e^{βω} for the IID law.
double iid_tilt(double p_plus, double beta);

}  // namespace pinlab
