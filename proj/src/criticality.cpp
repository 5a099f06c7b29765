#include "pinlab/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "pinlab/homogeneous.hpp"
#include "pinlab/io.hpp"
#include "pinlab/partition.hpp"
#include "pinlab/stats.hpp"

namespace pinlab {

double localization_threshold(double alpha, std::size_t N, double scale) {
    if (N < 2) throw std::invalid_argument("localization threshold needs N >= 2");
    const double n = static_cast<double>(N);
    return scale * (1.0 + alpha) * std::log(n) / n;
}

double annealed_gap_constant(double c0, double beta) {
    if (!(c0 > 0.0) || !(beta > 0.0)) throw std::invalid_argument("annealed_gap_constant: need c0 > 0 and beta > 0");
    const double shrink = -std::expm1(-c0) * -std::expm1(-beta);
    return -std::log1p(-shrink) / beta;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<BinaryEnvironment> draw_environments(const GeneratorSpec& spec, std::size_t N, std::size_t samples,
                                                 std::uint64_t seed, unsigned workers) {
    std::vector<BinaryEnvironment> envs(samples);
    std::vector<char> ok(samples, 0);
    parallel_for(samples, workers, [&](std::size_t i) {
        try {
            envs[i] = generate(spec, N, disorder_seed(seed, i));
            ok[i] = 1;
        } catch (const GenerationError&) {
        }
    });
    std::vector<BinaryEnvironment> kept;
    for (std::size_t i = 0; i < samples; ++i)
        if (ok[i]) kept.push_back(std::move(envs[i]));
    if (kept.empty()) throw std::runtime_error("every environment draw failed");
    return kept;
}

std::string trend_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return "single";
    bool dec = true, inc = true, flat = true;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        dec = dec && xs[i] < xs[i - 1];
        inc = inc && xs[i] > xs[i - 1];
        flat = flat && xs[i] == xs[i - 1];
    }
    if (dec) return "decreasing";
    if (inc) return "increasing";
    if (flat) return "constant";
    return "non-monotone";
}

void check_grid(std::span<const double> u_grid) {
    if (u_grid.empty()) throw std::invalid_argument("empty u grid");
    for (double u : u_grid)
        if (!(u > 0.0)) throw std::invalid_argument("u grid must be positive");
}

// Quenched estimates at h = -β + u, one shared seed so every u sees the same environments.
std::vector<FreeEnergyEstimate> quenched_on_grid(const RenewalLaw& law, const GeneratorSpec& spec, double beta,
                                                 std::span<const double> u_grid, std::size_t N, std::size_t samples,
                                                 std::uint64_t seed, unsigned workers) {
    const auto envs = draw_environments(spec, N, samples, seed, workers);
    std::vector<FreeEnergyEstimate> out;
    for (double u : u_grid) out.push_back(free_energy_on(law, envs, PinningParams{beta, -beta + u}, N, workers));
    return out;
}

std::vector<std::size_t> default_diag_sizes(std::size_t N) {
    std::vector<std::size_t> n;
    const std::size_t top = std::min<std::size_t>(N, std::size_t{1} << 16);
    for (int k = 4;; ++k) {
        const auto x = static_cast<std::size_t>(std::llround(std::exp2(k / 4.0)));
        if (x > top) break;
        if (x >= 2 && (n.empty() || x > n.back())) n.push_back(x);
    }
    return n;
}

}  // namespace

CriticalPointEstimate estimate_critical_point(const RenewalLaw& law, const GeneratorSpec& spec, double beta,
                                              std::span<const std::size_t> N_list, std::size_t samples,
                                              std::uint64_t seed, const CriticalOptions& opts) {
    validate(spec);
    validate(PinningParams{beta, 0.0});
    if (N_list.empty()) throw std::invalid_argument("critical point: empty N list");
    for (std::size_t i = 0; i < N_list.size(); ++i) {
        if (N_list[i] < 2 || N_list[i] > law.n_max()) throw std::invalid_argument("critical point: N outside [2, n_max]");
        if (i && N_list[i] <= N_list[i - 1]) throw std::invalid_argument("critical point: N list must increase");
    }
    if (samples < 1) throw std::invalid_argument("critical point: need samples >= 1");
    if (!(opts.tolerance > 0.0)) throw std::invalid_argument("critical point: tolerance must be positive");

    CriticalPointEstimate est;
    est.beta = beta;
    est.alpha = law.alpha();
    est.threshold_rule = format_double(opts.threshold_scale) + "*(1+alpha)*log(N)/N";
    est.tolerance = opts.tolerance;
    est.samples = samples;
    est.seed = seed;
    std::vector<double> values;
    for (std::size_t N : N_list) {
        const auto envs = draw_environments(spec, N, samples, derive_seed(seed, stream_tag("critical"), N), opts.workers);
        CriticalRow row;
        row.N = N;
        row.environments = envs.size();
        row.threshold = localization_threshold(law.alpha(), N, opts.threshold_scale);
        auto localized = [&](double h) {
            ++row.evaluations;
            return free_energy_on(law, envs, PinningParams{beta, h}, N, opts.workers).value >= row.threshold;
        };
        double lo = -beta, hi = beta + 1.0;
        if (!localized(hi)) {
            row.status = "delocalized-at-scale";
            row.bracket_lo = row.bracket_hi = row.h_c_hat = hi;
        } else {
            // Z ≤ Z^pur_N(0) = 1 pathwise at h = -β, so lo never localizes.
            while (hi - lo > opts.tolerance) {
                const double mid = 0.5 * (lo + hi);
                (localized(mid) ? hi : lo) = mid;
            }
            row.status = "crossing";
            row.bracket_lo = lo;
            row.bracket_hi = hi;
            row.h_c_hat = 0.5 * (lo + hi);
        }
        values.push_back(row.h_c_hat);
        est.rows.push_back(row);
    }
    est.trend = trend_of(values);
    return est;
}

void recompute_verdicts(BoundCheckReport& r) {
    const double z = r.band_z;
    if (r.kind == "smoothing") {
        bool all = true;
        for (auto& row : r.rows) {
            row.verdict = row.ratio < 1.0;
            all = all && row.verdict;
        }
        std::vector<std::size_t> order(r.rows.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r.rows[a].u > r.rows[b].u; });
        // Separation of consecutive bands as u decreases: positive means disjoint and decreasing.
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k < order.size(); ++k) {
            const BoundRow& big = r.rows[order[k - 1]];
            const BoundRow& small = r.rows[order[k]];
            margin = std::min(margin, (big.ratio - z * big.ratio_se) - (small.ratio + z * small.ratio_se));
        }
        r.margin = margin;
        r.pass = all && margin > 0.0;
    } else if (r.kind == "lower-bound") {
        double margin = std::numeric_limits<double>::infinity();
        bool all = true;
        for (auto& row : r.rows) {
            const double lower = row.F_hat - z * row.F_se;
            row.verdict = std::isfinite(row.rhs_lower) && lower >= row.rhs_lower;
            all = all && row.verdict;
            if (!std::isfinite(row.rhs_lower))
                margin = kNaN;
            else if (row.rhs_lower > 0.0 && !std::isnan(margin))
                margin = std::min(margin, lower / row.rhs_lower);
        }
        r.margin = margin;
        r.pass = all && margin >= 1.0;
    } else if (r.kind == "upper-bound-simple") {
        bool all = true;
        for (auto& row : r.rows) {
            row.verdict = row.F_hat - z * row.F_se <= row.rhs_upper;
            all = all && row.verdict;
        }
        const auto c1 = r.constants.find("C1");
        const auto c1r = r.constants.find("C1_refined");
        r.stable = c1 != r.constants.end() && c1r != r.constants.end() && c1r->second <= 2.0 * c1->second &&
                   c1r->second >= 0.5 * c1->second;
        r.margin = c1 != r.constants.end() && c1r != r.constants.end() ? c1r->second / c1->second : kNaN;
        r.pass = all && r.stable;
    } else {
        throw std::invalid_argument("unknown bound report kind '" + r.kind + "'");
    }
}

BoundCheckReport smoothing_ratio_scan(const RenewalLaw& law, const GeneratorSpec& spec, double beta,
                                      std::span<const double> u_grid, std::size_t N, std::size_t samples,
                                      std::uint64_t seed, const BoundOptions& opts) {
    validate(spec);
    check_grid(u_grid);
    BoundCheckReport r;
    r.kind = "smoothing";
    r.beta = beta;
    r.N = N;
    r.samples = samples;
    r.band_z = opts.band_z;
    const auto est = quenched_on_grid(law, spec, beta, u_grid, N, samples, seed, opts.workers);
    for (std::size_t k = 0; k < u_grid.size(); ++k) {
        BoundRow row;
        row.u = u_grid[k];
        row.F_hat = est[k].value;
        row.F_se = est[k].std_err;
        row.F0 = homogeneous_free_energy(law, row.u);
        row.ratio = row.F_hat / row.F0;
        row.ratio_se = row.F_se / row.F0;
        row.rhs_lower = row.rhs_upper = kNaN;
        row.A_u = row.tail_at_A = row.truncated_mean = kNaN;
        if (row.F_hat < opts.band_z * row.F_se) row.note = "indistinguishable from 0";
        r.rows.push_back(row);
    }
    recompute_verdicts(r);
    return r;
}

BoundCheckReport verify_lower_bound(const RenewalLaw& law, const GeneratorSpec& spec, double beta,
                                    std::span<const double> u_grid, std::size_t N, std::size_t samples,
                                    std::uint64_t seed, const BoundOptions& opts) {
    validate(spec);
    check_grid(u_grid);
    BoundCheckReport r;
    r.kind = "lower-bound";
    r.beta = beta;
    r.N = N;
    r.samples = samples;
    r.band_z = opts.band_z;

    const std::vector<std::size_t> sizes = opts.diag_n.empty() ? default_diag_sizes(N) : opts.diag_n;
    DiagnosticsOptions dopts = opts.diag;
    dopts.workers = opts.workers;
    const DisorderDiagnostics diag =
        estimate_xi_tail(spec, sizes, opts.diag_samples, derive_seed(seed, stream_tag("diagnostics"), 0), dopts);
    if (diag.regime_label != Regime::infinite_disorder)
        r.warnings.push_back("diagnostics label is " + to_string(diag.regime_label) + ", not infinite-disorder");

    const auto est = quenched_on_grid(law, spec, beta, u_grid, N, samples, seed, opts.workers);
    std::vector<BoundRow> rows(u_grid.size());
    for (std::size_t k = 0; k < u_grid.size(); ++k) {
        rows[k].u = u_grid[k];
        rows[k].F_hat = est[k].value;
        rows[k].F_se = est[k].std_err;
        rows[k].F0 = homogeneous_free_energy(law, rows[k].u);
        rows[k].ratio = rows[k].F_hat / rows[k].F0;
        rows[k].ratio_se = rows[k].F_se / rows[k].F0;
        rows[k].rhs_upper = rows[k].truncated_mean = kNaN;
    }

    // A_u and P̂(ξ₁ ≥ A_u) for each c0; c0 values with a saturated inverse are skipped.
    double best_margin = -std::numeric_limits<double>::infinity();
    double best_c0 = kNaN, best_c0p = kNaN;
    std::vector<double> best_A, best_tail;
    std::vector<std::string> saturated_notes(u_grid.size());
    for (double c0 : opts.c0_grid) {
        std::vector<double> A(u_grid.size()), tail(u_grid.size());
        bool usable = true;
        for (std::size_t k = 0; k < u_grid.size(); ++k) {
            const EpsilonInverse inv = epsilon_inverse(diag, c0 * rows[k].F0);
            if (inv.saturated || (!inv.under_range && inv.x == 0)) {
                saturated_notes[k] = "epsilon inverse saturated at c0=" + format_double(c0);
                usable = false;
                break;
            }
            if (inv.under_range) {
                A[k] = 1.0;
                tail[k] = 1.0;
            } else {
                A[k] = static_cast<double>(inv.x);
                tail[k] = tail_at(diag, inv.x).value_or(kNaN);
            }
        }
        if (!usable) continue;
        for (double c0p : opts.c0_prime_grid) {
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < u_grid.size(); ++k) {
                const double rhs = c0p * A[k] * tail[k] * rows[k].F0;
                m = std::min(m, (rows[k].F_hat - opts.band_z * rows[k].F_se) / rhs);
            }
            if (m > best_margin) {
                best_margin = m;
                best_c0 = c0;
                best_c0p = c0p;
                best_A = A;
                best_tail = tail;
            }
        }
    }
    for (std::size_t k = 0; k < u_grid.size(); ++k) {
        if (best_A.empty()) {
            rows[k].A_u = rows[k].tail_at_A = rows[k].rhs_lower = kNaN;
            rows[k].note = saturated_notes[k];
        } else {
            rows[k].A_u = best_A[k];
            rows[k].tail_at_A = best_tail[k];
            rows[k].rhs_lower = best_c0p * best_A[k] * best_tail[k] * rows[k].F0;
        }
    }
    r.rows = std::move(rows);
    if (best_A.empty()) r.warnings.push_back("no c0 in the grid gives an unsaturated A_u on every u");
    else {
        r.constants["c0"] = best_c0;
        r.constants["c0_prime"] = best_c0p;
    }
    recompute_verdicts(r);
    return r;
}

BoundCheckReport verify_upper_bound_simple(const RenewalLaw& law, const GeneratorSpec& spec, double beta,
                                           std::span<const double> u_grid, std::size_t N, std::size_t samples,
                                           std::uint64_t seed, const BoundOptions& opts) {
    validate(spec);
    check_grid(u_grid);
    for (double u : u_grid)
        if (u >= beta) throw std::invalid_argument("upper bound: every u must lie below beta");
    BoundCheckReport r;
    r.kind = "upper-bound-simple";
    r.beta = beta;
    r.N = N;
    r.samples = samples;
    r.band_z = opts.band_z;
    for (double u : u_grid)
        if (u > 0.5 * beta) r.warnings.push_back("u = " + format_double(u) + " is above beta/2");

    // First-run sample sorted in decreasing order with prefix sums for Ê[ξ₁ 1{ξ₁ ≥ x}].
    const std::size_t cap = std::holds_alternative<GaussianSignsParams>(spec) ? std::min(opts.tail_cap, N) : opts.tail_cap;
    std::vector<double> runs(opts.tail_samples);
    const std::uint64_t tag = stream_tag("first-run");
    parallel_for(runs.size(), opts.workers,
                 [&](std::size_t i) { runs[i] = sample_first_run(spec, cap, derive_seed(seed, tag, i)); });
    std::sort(runs.begin(), runs.end(), std::greater<>());
    std::vector<double> prefix(runs.size() + 1, 0.0);
    for (std::size_t i = 0; i < runs.size(); ++i) prefix[i + 1] = prefix[i] + runs[i];
    auto truncated_mean = [&](double x) {
        const auto count = static_cast<std::size_t>(
            std::lower_bound(runs.begin(), runs.end(), x, std::greater_equal<>()) - runs.begin());
        return prefix[count] / static_cast<double>(runs.size());
    };

    std::vector<double> sorted(u_grid.begin(), u_grid.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> refined = sorted;
    for (std::size_t k = 1; k < sorted.size(); ++k) refined.push_back(std::sqrt(sorted[k - 1] * sorted[k]));
    std::sort(refined.begin(), refined.end());
    const auto est = quenched_on_grid(law, spec, beta, refined, N, samples, seed, opts.workers);

    // Smallest C1 making F̂ ≤ C1·u·Ê on the points of `use`; infinite when a
    // point with Ê = 0 has F̂ clearly positive.
    auto fit_c1 = [&](double c, bool coarse_only) {
        double c1 = 0.0;
        for (std::size_t k = 0; k < refined.size(); ++k) {
            if (coarse_only && !std::binary_search(sorted.begin(), sorted.end(), refined[k])) continue;
            const double e = truncated_mean(c * beta / refined[k]);
            if (e > 0.0)
                c1 = std::max(c1, est[k].value / (refined[k] * e));
            else if (est[k].value - opts.band_z * est[k].std_err > 0.0)
                return std::numeric_limits<double>::infinity();
        }
        return std::max(c1, std::numeric_limits<double>::min());
    };
    double best_c = kNaN, best_c1 = std::numeric_limits<double>::infinity();
    for (double c : opts.c_grid) {
        const double c1 = fit_c1(c, true);
        if (c1 < best_c1) {
            best_c1 = c1;
            best_c = c;
        }
    }
    if (!std::isfinite(best_c1)) {
        best_c = opts.c_grid.empty() ? kNaN : opts.c_grid.front();
        r.warnings.push_back("no c in the grid admits a finite C1");
    }
    r.constants["c"] = best_c;
    r.constants["C1"] = best_c1;
    r.constants["C1_refined"] = std::isfinite(best_c) ? fit_c1(best_c, false) : best_c1;

    for (std::size_t k = 0; k < refined.size(); ++k) {
        if (!std::binary_search(sorted.begin(), sorted.end(), refined[k])) continue;
        BoundRow row;
        row.u = refined[k];
        row.F_hat = est[k].value;
        row.F_se = est[k].std_err;
        row.F0 = homogeneous_free_energy(law, row.u);
        row.ratio = row.F_hat / row.F0;
        row.ratio_se = row.F_se / row.F0;
        row.A_u = row.tail_at_A = row.rhs_lower = kNaN;
        row.truncated_mean = truncated_mean(best_c * beta / row.u);
        row.rhs_upper = best_c1 * row.u * row.truncated_mean;
        if (row.truncated_mean == 0.0) row.note = "no sampled run exceeds c*beta/u";
        r.rows.push_back(row);
    }
    recompute_verdicts(r);
    return r;
}

namespace {

const std::vector<std::string> kBoundHeader{"u",   "F_hat",     "F_se",      "F0",        "ratio",
                                            "ratio_se", "A_u", "tail_at_A", "truncated_mean", "rhs_lower",
                                            "rhs_upper", "verdict", "note"};

}  // namespace

void write_bound_csv(std::ostream& out, const BoundCheckReport& r) {
    out << csv_line(kBoundHeader);
    for (const BoundRow& row : r.rows) {
        const std::vector<std::string> f{format_double(row.u),         format_double(row.F_hat),
                                         format_double(row.F_se),      format_double(row.F0),
                                         format_double(row.ratio),     format_double(row.ratio_se),
                                         format_double(row.A_u),       format_double(row.tail_at_A),
                                         format_double(row.truncated_mean), format_double(row.rhs_lower),
                                         format_double(row.rhs_upper), row.verdict ? "pass" : "fail",
                                         row.note};
        out << csv_line(f);
    }
}

void read_bound_csv(std::istream& in, BoundCheckReport& r) {
    const auto records = read_csv(in);
    if (records.empty() || records[0] != kBoundHeader) throw std::runtime_error("bound csv: unexpected header");
    r.rows.clear();
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i];
        if (f.size() != kBoundHeader.size()) throw std::runtime_error("bound csv: bad record length");
        BoundRow row;
        row.u = parse_double(f[0]);
        row.F_hat = parse_double(f[1]);
        row.F_se = parse_double(f[2]);
        row.F0 = parse_double(f[3]);
        row.ratio = parse_double(f[4]);
        row.ratio_se = parse_double(f[5]);
        row.A_u = parse_double(f[6]);
        row.tail_at_A = parse_double(f[7]);
        row.truncated_mean = parse_double(f[8]);
        row.rhs_lower = parse_double(f[9]);
        row.rhs_upper = parse_double(f[10]);
        row.verdict = f[11] == "pass";
        row.note = f[12];
        r.rows.push_back(std::move(row));
    }
}

CriterionReport criterion_end_to_end(const RenewalLaw& law, const GeneratorSpec& spec,
                                     std::span<const double> beta_list, std::uint64_t seed,
                                     const CriterionOptions& opts) {
    validate(spec);
    if (beta_list.empty()) throw std::invalid_argument("criterion: empty beta list");
    CriterionReport rep;
    std::vector<std::size_t> sizes = opts.diag_n;
    if (sizes.empty())
        for (std::size_t n = 2; n <= 512; n *= 2) sizes.push_back(n);
    rep.diagnostics = estimate_xi_tail(spec, sizes, opts.diag_samples, derive_seed(seed, stream_tag("diagnostics"), 0),
                                       opts.diag);
    const Regime label = rep.diagnostics.regime_label;
    if (label == Regime::undetermined) {
        rep.verdict = "inconclusive";
        rep.detail = "regime label undetermined";
        return rep;
    }
    rep.c0 = rep.diagnostics.epsilon_table.empty() ? 0.0 : rep.diagnostics.epsilon_table.back().second;
    bool consistent = true;
    std::string detail;
    for (std::size_t b = 0; b < beta_list.size(); ++b) {
        const double beta = beta_list[b];
        rep.estimates.push_back(estimate_critical_point(law, spec, beta, opts.N_list, opts.samples,
                                                        derive_seed(seed, stream_tag("criterion"), b), opts.critical));
        const auto& est = rep.estimates.back();
        std::vector<double> gaps;
        for (const auto& row : est.rows) gaps.push_back(row.h_c_hat + beta);
        if (label == Regime::infinite_disorder) {
            const bool ok = std::all_of(gaps.begin(), gaps.end(), [](double g) { return g > 0.0; }) &&
                            trend_of(gaps) == "decreasing";
            rep.c_beta.push_back(kNaN);
            consistent = consistent && ok;
            detail += "beta=" + format_double(beta) + ": gap trend " + trend_of(gaps) + "; ";
        } else {
            const double cb = rep.c0 > 0.0 ? annealed_gap_constant(rep.c0, beta) : 0.0;
            rep.c_beta.push_back(cb);
            const bool ok = rep.c0 > 0.0 && gaps.back() >= 0.5 * cb * beta;
            consistent = consistent && ok;
            detail += "beta=" + format_double(beta) + ": gap " + format_double(gaps.back()) + " vs c_beta*beta/2 " +
                      format_double(0.5 * cb * beta) + "; ";
        }
    }
    rep.verdict = consistent ? "consistent" : "inconsistent";
    rep.detail = to_string(label) + ": " + detail;
    return rep;
}

nlohmann::json to_json(const CriticalPointEstimate& e) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : e.rows)
        rows.push_back({{"N", r.N},
                        {"threshold", r.threshold},
                        {"h_c_hat", r.h_c_hat},
                        {"bracket", {r.bracket_lo, r.bracket_hi}},
                        {"status", r.status},
                        {"environments", r.environments},
                        {"evaluations", r.evaluations}});
    return {{"beta", e.beta},         {"alpha", e.alpha},         {"rows", rows},
            {"threshold_rule", e.threshold_rule}, {"tolerance", e.tolerance}, {"trend", e.trend},
            {"samples", e.samples},   {"seed", e.seed}};
}

nlohmann::json to_json(const BoundCheckReport& r) {
    auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(format_double(x)); };
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"u", row.u},
                        {"F_hat", num(row.F_hat)},
                        {"F_se", num(row.F_se)},
                        {"F0", num(row.F0)},
                        {"ratio", num(row.ratio)},
                        {"ratio_se", num(row.ratio_se)},
                        {"A_u", num(row.A_u)},
                        {"tail_at_A", num(row.tail_at_A)},
                        {"truncated_mean", num(row.truncated_mean)},
                        {"rhs_lower", num(row.rhs_lower)},
                        {"rhs_upper", num(row.rhs_upper)},
                        {"verdict", row.verdict},
                        {"note", row.note}});
    nlohmann::json constants = nlohmann::json::object();
    for (const auto& [k, v] : r.constants) constants[k] = num(v);
    return {{"kind", r.kind},     {"beta", r.beta},     {"N", r.N},           {"samples", r.samples},
            {"rows", rows},       {"constants", constants}, {"band_z", r.band_z}, {"margin", num(r.margin)},
            {"stable", r.stable}, {"pass", r.pass},     {"warnings", r.warnings}};
}

nlohmann::json to_json(const CriterionReport& r) {
    nlohmann::json est = nlohmann::json::array();
    for (const auto& e : r.estimates) est.push_back(to_json(e));
    return {{"diagnostics", to_json(r.diagnostics)},
            {"regime", to_string(r.diagnostics.regime_label)},
            {"estimates", est},
            {"c0", r.c0},
            {"c_beta", r.c_beta},
            {"verdict", r.verdict},
            {"detail", r.detail}};
}

}  // namespace pinlab
