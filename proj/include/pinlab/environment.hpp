#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pinlab/rng.hpp"

namespace pinlab {

/// Environment values ω_0..ω_N with ω_0 = +1 and an implicit ω_{-1} = -1.
/// Sites 1..N are what the pinning model sees.
struct BinaryEnvironment {
    std::vector<std::int8_t> omega;
    std::string generator_id;
    nlohmann::json params;
    std::uint64_t seed = 0;

    std::size_t sites() const noexcept { return omega.empty() ? 0 : omega.size() - 1; }
    /// ω_1..ω_N.
    std::span<const std::int8_t> site_span(std::size_t N) const;
};

struct IidSpec {
    double p_plus = 0.5;
};

/// Two-state chain with stay probabilities in +1 and -1.
struct MarkovSpec {
    double q_pp = 0.5;
    double q_mm = 0.5;
};

/// Alternating blocks with P(size ≥ n) = n^{-theta}. The repulsive blocks use
/// theta_minus when set, otherwise the same exponent.
struct BlockSpec {
    double theta = 1.5;
    std::optional<double> theta_minus;
    double minus_exponent() const { return theta_minus.value_or(theta); }
};

/// Signs of a stationary Gaussian sequence with ρ_k = (1+k)^{-a}.
/// a = +infinity selects the independent limit.
struct GaussianSignsParams {
    double a = 0.5;
    double rho(std::size_t k) const;
    bool independent() const noexcept { return a == std::numeric_limits<double>::infinity(); }
};

using GeneratorSpec = std::variant<IidSpec, MarkovSpec, BlockSpec, GaussianSignsParams>;

std::string generator_id(const GeneratorSpec& spec);
nlohmann::json generator_params(const GeneratorSpec& spec);
/// {"type": id, ...params}; unknown keys are rejected.
nlohmann::json generator_to_json(const GeneratorSpec& spec);
GeneratorSpec generator_from_json(const nlohmann::json& j);
/// Throws std::invalid_argument on out-of-range parameters.
void validate(const GeneratorSpec& spec);
/// Compact label for CSV rows, e.g. "q_pp=0.7;q_mm=0.7".
std::string generator_label(const GeneratorSpec& spec);

/// A generator could not produce a valid environment for this seed.
class GenerationError : public std::runtime_error {
public:
    GenerationError(const std::string& what, std::uint64_t seed) : std::runtime_error(what), seed_(seed) {}
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

/// Circulant embedding spectrum has a negative part beyond the clipping guard.
class EmbeddingError : public std::runtime_error {
public:
    EmbeddingError(const std::string& what, double magnitude) : std::runtime_error(what), magnitude_(magnitude) {}
    double magnitude() const noexcept { return magnitude_; }

private:
    double magnitude_;
};

BinaryEnvironment generate_iid(double p_plus, std::size_t N, std::uint64_t seed);
BinaryEnvironment generate_markov(double q_pp, double q_mm, std::size_t N, std::uint64_t seed);
BinaryEnvironment generate_block_env(const BlockSpec& spec, std::size_t N, std::uint64_t seed);
BinaryEnvironment generate_gaussian_signs(const GaussianSignsParams& params, std::size_t N, std::uint64_t seed);
BinaryEnvironment generate(const GeneratorSpec& spec, std::size_t N, std::uint64_t seed);

/// Largest N accepted by the Gaussian generator.
constexpr std::size_t kGaussianCapacity = std::size_t{1} << 24;

/// P(ξ₁ ≥ n) in closed form where the law allows it (IID, Markov, block).
std::optional<double> exact_xi_tail(const GeneratorSpec& spec, std::size_t n);

/// P(ω_1..ω_N = pattern | ω_{-1} = -1, ω_0 = +1) for generators with a
/// computable prefix law; nullopt for Gaussian signs.
std::optional<double> prefix_probability(const GeneratorSpec& spec, std::span<const std::int8_t> pattern);

/// Length of the first attractive run, capped at `cap`. Drawn directly for
/// IID and Markov (geometric) and the block environment (uncapped there);
/// Gaussian signs generate `cap` sites.
double sample_first_run(const GeneratorSpec& spec, std::size_t cap, std::uint64_t seed);

/// Exact-synthesis sampler for a stationary Gaussian sequence of a given length.
class CirculantSampler {
public:
    /// rho[k] for k = 0..length-1. Throws EmbeddingError if the embedding
    /// spectrum is negative beyond 1e-8 of its maximum.
    CirculantSampler(std::span<const double> rho, std::size_t length);
    ~CirculantSampler();
    CirculantSampler(const CirculantSampler&) = delete;
    CirculantSampler& operator=(const CirculantSampler&) = delete;

    std::size_t length() const noexcept { return length_; }
    std::size_t embedding_size() const noexcept { return m_; }
    double min_eigenvalue() const noexcept { return min_eig_; }
    double max_eigenvalue() const noexcept { return max_eig_; }

    /// Fills `first` (and `second`, if non-empty) with independent draws.
    void sample(Engine& eng, std::span<double> first, std::span<double> second = {}) const;

private:
    std::size_t length_;
    std::size_t m_;
    std::vector<double> scale_;
    double min_eig_ = 0.0;
    double max_eig_ = 0.0;
    void* plan_ = nullptr;
};

/// Shared sampler for (params, length); built once and reused.
std::shared_ptr<const CirculantSampler> gaussian_sampler(const GaussianSignsParams& params, std::size_t length);

/// Stationary Gaussian draw by circulant embedding, falling back to a dense
/// Cholesky factor (length ≤ 4096) when the embedding is not usable.
std::vector<double> sample_stationary_gaussian(std::span<const double> rho, std::size_t length, std::uint64_t seed);

}  // namespace pinlab
