#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pinlab/environment.hpp"

namespace pinlab {

enum class Regime { infinite_disorder, conventional, undetermined };
std::string to_string(Regime r);

enum class TailMethod {
    automatic,  ///< orthant route for Gaussian signs, environment sampling otherwise
    environment_mc,
    orthant
};

struct TailRow {
    std::size_t n = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    /// Hits for sampling rows, effective sample size for orthant rows.
    double support = 0.0;
    bool resolved = false;
    std::string method;

    double rate() const;     ///< -(1/n) log p_hat
    double rate_lo() const;  ///< from ci_high
    double rate_hi() const;  ///< from ci_low
};

struct RegimeSummary {
    Regime label = Regime::undetermined;
    double first_mean = 0.0, first_lo = 0.0, first_hi = 0.0;
    double last_mean = 0.0, last_lo = 0.0, last_hi = 0.0;
    std::size_t first_rows = 0, last_rows = 0;
};

struct DisorderDiagnostics {
    std::vector<TailRow> tail_estimates;
    /// (x, ε(x)) over resolved sizes x ≥ 2, ε non-increasing.
    std::vector<std::pair<std::size_t, double>> epsilon_table;
    Regime regime_label = Regime::undetermined;
    RegimeSummary regime;
    /// First requested n without enough support to be resolved.
    std::optional<std::size_t> resolution_limit;
    std::size_t samples = 0;
};

struct DiagnosticsOptions {
    TailMethod method = TailMethod::automatic;
    /// Sampling rows need this many hits to count as resolved.
    std::size_t min_hits = 20;
    /// Orthant rows need this effective sample size.
    double min_ess = 100.0;
    std::size_t orthant_samples = 8192;
    /// Orthant rows above this size are left unresolved (cost grows as n^2 per sample).
    std::size_t orthant_max_n = 1024;
    double z = 1.959963984540054;
    unsigned workers = 1;
};

DisorderDiagnostics estimate_xi_tail(const GeneratorSpec& spec, std::span<const std::size_t> n_values,
                                     std::size_t samples, std::uint64_t seed, const DiagnosticsOptions& opts = {});

/// Fills epsilon_table and the regime label from tail_estimates.
void finalize_diagnostics(DisorderDiagnostics& diag);

/// Banded trend rule on resolved rows with n ≥ 2.
RegimeSummary classify_regime(std::span<const TailRow> rows);

struct EpsilonInverse {
    std::size_t x = 0;
    bool under_range = false;
    bool saturated = false;
};

EpsilonInverse epsilon_inverse(std::span<const std::pair<std::size_t, double>> table, double u);
EpsilonInverse epsilon_inverse(const DisorderDiagnostics& diag, double u);

/// ε(x) at an arbitrary x: the running infimum over tabulated sizes ≤ x.
std::optional<double> epsilon_at(const DisorderDiagnostics& diag, std::size_t x);

/// P̂(ξ₁ ≥ n) read from the table, interpolating log p linearly between rows.
std::optional<double> tail_at(const DisorderDiagnostics& diag, std::size_t n);

nlohmann::json to_json(const DisorderDiagnostics& d);

}  // namespace pinlab
