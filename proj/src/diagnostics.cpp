#include "pinlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pinlab/orthant.hpp"
#include "pinlab/stats.hpp"

namespace pinlab {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::infinite_disorder: return "infinite-disorder";
        case Regime::conventional: return "conventional";
        case Regime::undetermined: return "undetermined";
    }
    return "undetermined";
}

double TailRow::rate() const { return -std::log(p_hat) / static_cast<double>(n); }
double TailRow::rate_lo() const { return -std::log(ci_high) / static_cast<double>(n); }
double TailRow::rate_hi() const { return -std::log(ci_low) / static_cast<double>(n); }

namespace {

std::vector<TailRow> sampled_rows(const GeneratorSpec& spec, std::span<const std::size_t> n_values, std::size_t samples,
                                  std::uint64_t seed, const DiagnosticsOptions& opts) {
    const std::size_t cap = *std::max_element(n_values.begin(), n_values.end());
    std::vector<double> runs(samples);
    const std::uint64_t tag = stream_tag("xi-tail");
    parallel_for(samples, opts.workers, [&](std::size_t i) { runs[i] = sample_first_run(spec, cap, derive_seed(seed, tag, i)); });
    std::vector<TailRow> rows;
    for (std::size_t n : n_values) {
        const auto hits = static_cast<std::size_t>(
            std::count_if(runs.begin(), runs.end(), [n](double r) { return r >= static_cast<double>(n); }));
        TailRow row;
        row.n = n;
        row.p_hat = static_cast<double>(hits) / static_cast<double>(samples);
        const Interval ci = wilson_interval(hits, samples, opts.z);
        row.ci_low = ci.lo;
        row.ci_high = ci.hi;
        row.support = static_cast<double>(hits);
        row.resolved = hits >= opts.min_hits;
        row.method = "environment-mc";
        rows.push_back(row);
    }
    return rows;
}

std::vector<TailRow> orthant_rows(const GaussianSignsParams& params, std::span<const std::size_t> n_values,
                                  std::uint64_t seed, const DiagnosticsOptions& opts) {
    std::vector<TailRow> rows(n_values.size());
    OrthantOptions oo;
    oo.method = OrthantMethod::sequential_conditioning;
    parallel_for(n_values.size(), opts.workers, [&](std::size_t i) {
        const std::size_t n = n_values[i];
        TailRow& row = rows[i];
        row.n = n;
        row.method = "orthant";
        if (n <= 1) {
            row.p_hat = row.ci_low = row.ci_high = 1.0;
            row.support = static_cast<double>(opts.orthant_samples);
            row.resolved = true;
            return;
        }
        if (n > opts.orthant_max_n) {
            row.method = "orthant-skipped";
            row.resolved = false;
            return;
        }
        const OrthantEstimate e = palm_run_tail(params, n, opts.orthant_samples, derive_seed(seed, stream_tag("xi-tail-orthant"), n), oo);
        row.p_hat = std::exp(e.log_p);
        row.ci_low = std::exp(e.log_p - opts.z * e.std_err);
        row.ci_high = std::min(1.0, std::exp(e.log_p + opts.z * e.std_err));
        row.support = e.ess;
        row.resolved = !e.collapsed(opts.min_ess) && std::isfinite(e.log_p);
    });
    return rows;
}

}  // namespace

RegimeSummary classify_regime(std::span<const TailRow> rows) {
    RegimeSummary s;
    std::vector<const TailRow*> used;
    for (const auto& r : rows)
        if (r.resolved && r.n >= 2 && r.p_hat > 0.0) used.push_back(&r);
    if (used.size() < 2) return s;
    std::sort(used.begin(), used.end(), [](auto* a, auto* b) { return a->n < b->n; });
    const double n_lo = static_cast<double>(used.front()->n);
    const double n_hi = static_cast<double>(used.back()->n);
    for (const TailRow* r : used) {
        const double n = static_cast<double>(r->n);
        if (n < 10.0 * n_lo) {
            s.first_mean += r->rate();
            s.first_lo += r->rate_lo();
            s.first_hi += r->rate_hi();
            ++s.first_rows;
        }
        if (n > n_hi / 10.0) {
            s.last_mean += r->rate();
            s.last_lo += r->rate_lo();
            s.last_hi += r->rate_hi();
            ++s.last_rows;
        }
    }
    const double f = static_cast<double>(s.first_rows), l = static_cast<double>(s.last_rows);
    s.first_mean /= f;
    s.first_lo /= f;
    s.first_hi /= f;
    s.last_mean /= l;
    s.last_lo /= l;
    s.last_hi /= l;
    if (s.last_mean < 0.5 * s.first_mean && s.last_hi < s.first_lo)
        s.label = Regime::infinite_disorder;
    else if (s.last_mean >= 0.5 * s.first_mean && s.last_lo > 0.0)
        s.label = Regime::conventional;
    return s;
}

void finalize_diagnostics(DisorderDiagnostics& diag) {
    auto& rows = diag.tail_estimates;
    std::sort(rows.begin(), rows.end(), [](const TailRow& a, const TailRow& b) { return a.n < b.n; });
    diag.resolution_limit.reset();
    diag.epsilon_table.clear();
    double running = std::numeric_limits<double>::infinity();
    for (auto& r : rows) {
        if (!r.resolved) {
            if (!diag.resolution_limit) diag.resolution_limit = r.n;
            continue;
        }
        // Rows beyond the first unresolved size are kept but never extrapolated across.
        if (diag.resolution_limit) {
            r.resolved = false;
            continue;
        }
        if (r.n < 2) continue;
        running = std::min(running, r.rate());
        diag.epsilon_table.emplace_back(r.n, running);
    }
    diag.regime = classify_regime(rows);
    diag.regime_label = diag.regime.label;
}

DisorderDiagnostics estimate_xi_tail(const GeneratorSpec& spec, std::span<const std::size_t> n_values,
                                     std::size_t samples, std::uint64_t seed, const DiagnosticsOptions& opts) {
    if (samples < 100) throw std::invalid_argument("estimate_xi_tail: need at least 100 samples");
    if (n_values.empty()) throw std::invalid_argument("estimate_xi_tail: empty size list");
    validate(spec);
    DisorderDiagnostics diag;
    diag.samples = samples;
    const auto* gauss = std::get_if<GaussianSignsParams>(&spec);
    TailMethod method = opts.method;
    if (method == TailMethod::automatic)
        method = gauss && !gauss->independent() ? TailMethod::orthant : TailMethod::environment_mc;
    if (method == TailMethod::orthant) {
        if (!gauss) throw std::invalid_argument("estimate_xi_tail: the orthant route needs Gaussian signs");
        diag.tail_estimates = orthant_rows(*gauss, n_values, seed, opts);
    } else {
        diag.tail_estimates = sampled_rows(spec, n_values, samples, seed, opts);
    }
    finalize_diagnostics(diag);
    return diag;
}

EpsilonInverse epsilon_inverse(std::span<const std::pair<std::size_t, double>> table, double u) {
    if (table.empty()) throw std::invalid_argument("epsilon_inverse: empty table");
    EpsilonInverse r;
    if (u > table.front().second) {
        r.x = table.front().first;
        r.under_range = true;
        return r;
    }
    for (const auto& [x, eps] : table)
        if (eps >= u) r.x = x;
    r.saturated = u < table.back().second;
    return r;
}

EpsilonInverse epsilon_inverse(const DisorderDiagnostics& diag, double u) {
    return epsilon_inverse(diag.epsilon_table, u);
}

std::optional<double> epsilon_at(const DisorderDiagnostics& diag, std::size_t x) {
    std::optional<double> out;
    for (const auto& [n, eps] : diag.epsilon_table)
        if (n <= x) out = eps;
    return out;
}

std::optional<double> tail_at(const DisorderDiagnostics& diag, std::size_t n) {
    if (n <= 1) return 1.0;
    const TailRow* below = nullptr;
    const TailRow* above = nullptr;
    for (const auto& r : diag.tail_estimates) {
        if (!r.resolved || r.p_hat <= 0.0) continue;
        if (r.n <= n) below = &r;
        if (r.n >= n && !above) above = &r;
    }
    if (!above) return std::nullopt;
    if (!below) below = above;
    if (below->n == above->n) return below->p_hat;
    // log-linear interpolation in n between neighbouring rows
    const double t = (static_cast<double>(n) - static_cast<double>(below->n)) /
                     (static_cast<double>(above->n) - static_cast<double>(below->n));
    return std::exp((1.0 - t) * std::log(below->p_hat) + t * std::log(above->p_hat));
}

nlohmann::json to_json(const DisorderDiagnostics& d) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : d.tail_estimates)
        rows.push_back({{"n", r.n}, {"p_hat", r.p_hat}, {"ci_low", r.ci_low}, {"ci_high", r.ci_high},
                        {"support", r.support}, {"resolved", r.resolved}, {"method", r.method}});
    nlohmann::json eps = nlohmann::json::array();
    for (const auto& [x, e] : d.epsilon_table) eps.push_back({x, e});
    nlohmann::json j{{"tail_estimates", rows},
                     {"epsilon_table", eps},
                     {"regime", to_string(d.regime_label)},
                     {"first_decade_rate", d.regime.first_mean},
                     {"last_decade_rate", d.regime.last_mean},
                     {"samples", d.samples}};
    j["resolution_limit"] = d.resolution_limit ? nlohmann::json(*d.resolution_limit) : nlohmann::json(nullptr);
    return j;
}

}  // namespace pinlab
