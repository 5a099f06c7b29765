#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pinlab/diagnostics.hpp"
#include "pinlab/environment.hpp"
#include "pinlab/renewal.hpp"

namespace pinlab {

/// θ_N = scale·(1+α)·log N / N.
double localization_threshold(double alpha, std::size_t N, double scale = 4.0);

/// c_β = -(1/β) log(1 - (1-e^{-c0})(1-e^{-β})).
double annealed_gap_constant(double c0, double beta);

struct CriticalRow {
    std::size_t N = 0;
    double threshold = 0.0;
    double h_c_hat = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    /// "crossing" or "delocalized-at-scale" (mean F_N below θ_N on the whole range).
    std::string status;
    std::size_t environments = 0;
    std::size_t evaluations = 0;
};

struct CriticalPointEstimate {
    double beta = 0.0;
    double alpha = 0.0;
    std::vector<CriticalRow> rows;
    std::string threshold_rule;
    double tolerance = 1e-3;
    /// Trend of h_c_hat over N: decreasing, increasing, constant, non-monotone or single.
    std::string trend;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

struct CriticalOptions {
    double tolerance = 1e-3;
    double threshold_scale = 4.0;
    unsigned workers = 1;
};

/// Bisection on h ∈ [-β, β+1] for the crossing of mean F_N with θ_N, using the
/// same environments at every h.
CriticalPointEstimate estimate_critical_point(const RenewalLaw& law, const GeneratorSpec& spec, double beta,
                                              std::span<const std::size_t> N_list, std::size_t samples,
                                              std::uint64_t seed, const CriticalOptions& opts = {});

struct BoundRow {
    double u = 0.0;
    double F_hat = 0.0;
    double F_se = 0.0;
    /// Homogeneous F(0, u).
    double F0 = 0.0;
    double ratio = 0.0;
    double ratio_se = 0.0;
    double A_u = 0.0;
    double tail_at_A = 0.0;
    double truncated_mean = 0.0;
    double rhs_lower = 0.0;
    double rhs_upper = 0.0;
    bool verdict = false;
    std::string note;
};

struct BoundCheckReport {
    /// "smoothing", "lower-bound" or "upper-bound-simple".
    std::string kind;
    double beta = 0.0;
    std::size_t N = 0;
    std::size_t samples = 0;
    std::vector<BoundRow> rows;
    std::map<std::string, double> constants;
    double band_z = 1.0;
    double margin = 0.0;
    bool stable = true;
    bool pass = false;
    std::vector<std::string> warnings;
};

struct BoundOptions {
    /// Half-width of the error bands in standard errors.
    double band_z = 1.0;
    /// First-run draws for Ê[ξ₁ 1{ξ₁ > x}].
    std::size_t tail_samples = 1'000'000;
    std::size_t tail_cap = std::size_t{1} << 20;
    /// Sizes and draws for the diagnostics used by the lower bound.
    std::vector<std::size_t> diag_n;
    std::size_t diag_samples = 1'000'000;
    DiagnosticsOptions diag;
    std::vector<double> c0_grid{0.1, 0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> c0_prime_grid{0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
    std::vector<double> c_grid{0.25, 0.5, 1.0};
    unsigned workers = 1;
};

BoundCheckReport smoothing_ratio_scan(const RenewalLaw& law, const GeneratorSpec& spec, double beta,
                                      std::span<const double> u_grid, std::size_t N, std::size_t samples,
                                      std::uint64_t seed, const BoundOptions& opts = {});

BoundCheckReport verify_lower_bound(const RenewalLaw& law, const GeneratorSpec& spec, double beta,
                                    std::span<const double> u_grid, std::size_t N, std::size_t samples,
                                    std::uint64_t seed, const BoundOptions& opts = {});

/// Requires u < β on the grid; points above β/2 carry a warning.
BoundCheckReport verify_upper_bound_simple(const RenewalLaw& law, const GeneratorSpec& spec, double beta,
                                           std::span<const double> u_grid, std::size_t N, std::size_t samples,
                                           std::uint64_t seed, const BoundOptions& opts = {});

/// Recomputes row verdicts, margin and pass from the stored numbers alone.
void recompute_verdicts(BoundCheckReport& report);

void write_bound_csv(std::ostream& out, const BoundCheckReport& report);
/// Reads rows written by write_bound_csv into `report` (other fields untouched).
void read_bound_csv(std::istream& in, BoundCheckReport& report);

struct CriterionOptions {
    std::vector<std::size_t> N_list{std::size_t{1} << 9, std::size_t{1} << 11, std::size_t{1} << 13};
    std::size_t samples = 32;
    std::vector<std::size_t> diag_n;
    std::size_t diag_samples = 200'000;
    DiagnosticsOptions diag;
    CriticalOptions critical;
};

struct CriterionReport {
    DisorderDiagnostics diagnostics;
    std::vector<CriticalPointEstimate> estimates;
    /// ε at the largest resolved size, used as c0 in the conventional case.
    double c0 = 0.0;
    std::vector<double> c_beta;
    /// "consistent", "inconsistent" or "inconclusive".
    std::string verdict;
    std::string detail;
};

CriterionReport criterion_end_to_end(const RenewalLaw& law, const GeneratorSpec& spec,
                                     std::span<const double> beta_list, std::uint64_t seed,
                                     const CriterionOptions& opts = {});

nlohmann::json to_json(const CriticalPointEstimate& e);
nlohmann::json to_json(const BoundCheckReport& r);
nlohmann::json to_json(const CriterionReport& r);

}  // namespace pinlab
