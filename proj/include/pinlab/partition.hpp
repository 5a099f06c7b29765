#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinlab/environment.hpp"
#include "pinlab/renewal.hpp"

namespace pinlab {

struct PinningParams {
    double beta = 0.0;
    double h = 0.0;
    /// Distance to the trivial bound, u = h + β.
    double u() const noexcept { return h + beta; }
};

/// Throws std::invalid_argument for β < 0 or non-finite / extreme values.
void validate(const PinningParams& p);

struct PartitionOptions {
    bool contacts = true;
    bool keep_pinned_table = true;
};

struct PartitionTrace {
    /// log Z^pin over [0, m] for m = 0..N (empty when not requested).
    std::vector<double> logZpin;
    double logZfree = 0.0;
    /// E Σ δ_n under the free-boundary measure (0 when not requested).
    double expected_contacts = 0.0;
    std::size_t N = 0;
};

/// Exact O(N²) transfer over contact positions for sites ω_1..ω_N.
PartitionTrace pinned_partition(const RenewalLaw& law, std::span<const std::int8_t> sites, const PinningParams& params,
                                const PartitionOptions& opts = {});
PartitionTrace pinned_partition(const RenewalLaw& law, const BinaryEnvironment& env, const PinningParams& params,
                                std::size_t N, const PartitionOptions& opts = {});

/// log Z free boundary only; the fast path used by the Monte Carlo drivers.
double log_free_partition(const RenewalLaw& law, std::span<const std::int8_t> sites, const PinningParams& params);

/// expected_contacts / N for the free-boundary measure.
double contact_fraction(const RenewalLaw& law, const BinaryEnvironment& env, const PinningParams& params, std::size_t N);

/// log Z^pur_N(h): the β = 0 system of size N.
double homogeneous_log_partition(const RenewalLaw& law, double h, std::size_t N);

struct FreeEnergyEstimate {
    double value = 0.0;
    double std_err = 0.0;
    std::size_t N = 0;
    std::size_t samples = 0;
    std::size_t failures = 0;
    /// (1/N) log Z per successful sample, in sample-index order.
    std::vector<double> per_sample;
    std::vector<std::uint64_t> seeds;
    bool heavy_tail = false;
    std::string mode = "mc";
};

/// Per-sample seeds are derive_seed(root, "disorder", i).
std::uint64_t disorder_seed(std::uint64_t root, std::size_t index);

FreeEnergyEstimate free_energy_estimate(const RenewalLaw& law, const GeneratorSpec& spec, const PinningParams& params,
                                        std::size_t N, std::size_t samples, std::uint64_t seed, unsigned workers = 1);

/// Quenched (1/N) log Z for a fixed set of environments; used with common
/// random numbers by the critical-point driver.
FreeEnergyEstimate free_energy_on(const RenewalLaw& law, std::span<const BinaryEnvironment> envs,
                                  const PinningParams& params, std::size_t N, unsigned workers = 1);

nlohmann::json to_json(const FreeEnergyEstimate& e);

}  // namespace pinlab
