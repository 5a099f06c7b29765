#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pinlab/environment.hpp"
#include "pinlab/stats.hpp"

namespace pinlab {

enum class OrthantMethod { automatic, plain_mc, sequential_conditioning };
std::string to_string(OrthantMethod m);

struct OrthantOptions {
    OrthantMethod method = OrthantMethod::automatic;
    /// Independent batches used for the standard error.
    std::size_t batches = 10;
    /// Resample a batch when its effective sample size drops below this
    /// fraction of the batch size. Zero gives the plain GHK weights.
    double resample_fraction = 0.5;
    /// Automatic mode switches to plain MC when a pilot predicts p at least this large.
    double plain_mc_threshold = 1e-3;
    std::size_t pilot_samples = 1000;
};

struct OrthantEstimate {
    std::size_t n = 0;
    double log_p = 0.0;
    double std_err = 0.0;
    /// Sum over batches of the smallest effective sample size seen (hits for plain MC).
    double ess = 0.0;
    std::size_t samples = 0;
    OrthantMethod method = OrthantMethod::sequential_conditioning;
    bool collapsed(double min_ess = 100.0) const { return ess < min_ess; }
};

/// P(X ≥ 0 componentwise) for X ~ N(0, cov).
OrthantEstimate orthant_probability_cov(const Eigen::MatrixXd& cov, std::size_t samples, std::uint64_t seed,
                                        const OrthantOptions& opts = {});

/// P(W_1 ≥ 0, ..., W_n ≥ 0) for the latent sequence of the Gaussian signs environment.
OrthantEstimate orthant_probability(const GaussianSignsParams& params, std::size_t n, std::size_t samples,
                                    std::uint64_t seed, const OrthantOptions& opts = {});

/// Orthant probability of the sub-vector (W_{i_1}, ..., W_{i_n}).
OrthantEstimate subsequence_orthant(const GaussianSignsParams& params, std::span<const std::size_t> indices,
                                    std::size_t samples, std::uint64_t seed, const OrthantOptions& opts = {});

/// P(ξ₁ ≥ n) for the Gaussian signs environment conditioned on ω_{-1} = -1, ω_0 = +1:
/// P(W_{-1} < 0, W_0..W_{n-1} ≥ 0) / P(W_{-1} < 0, W_0 ≥ 0).
OrthantEstimate palm_run_tail(const GaussianSignsParams& params, std::size_t n, std::size_t samples,
                              std::uint64_t seed, const OrthantOptions& opts = {});

/// 1/4 + asin(ρ)/(2π).
double bivariate_orthant(double rho);

struct ExponentFit {
    double a = 0.0;
    /// "stretched" regresses log(-log p) on log n, "linear" regresses -log p on n.
    std::string mode;
    std::vector<OrthantEstimate> points;
    std::vector<std::size_t> dropped;
    LinearFit fit;
    double slope_lo = 0.0;
    double slope_hi = 0.0;
    /// Reference window for the stretched exponent: [a, a + max log log n / log n].
    double window_lo = 0.0;
    double window_hi = 0.0;
};

ExponentFit exponent_fit(const GaussianSignsParams& params, std::span<const std::size_t> n_values, std::size_t samples,
                         std::uint64_t seed, const OrthantOptions& opts = {});

nlohmann::json to_json(const OrthantEstimate& e);
nlohmann::json to_json(const ExponentFit& f);

}  // namespace pinlab
