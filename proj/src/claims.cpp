#include "pinlab/claims.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "pinlab/annealed.hpp"
#include "pinlab/criticality.hpp"
#include "pinlab/diagnostics.hpp"
#include "pinlab/environment.hpp"
#include "pinlab/homogeneous.hpp"
#include "pinlab/io.hpp"
#include "pinlab/oracles.hpp"
#include "pinlab/orthant.hpp"
#include "pinlab/partition.hpp"
#include "pinlab/renewal.hpp"
#include "pinlab/stats.hpp"

namespace pinlab {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

namespace {

void check(ClaimResult& r, std::string name, double measured, std::string target, bool ok) {
    r.checks.push_back(Check{std::move(name), measured, std::move(target), ok});
}

// Short form for check labels; CSV columns keep full precision.
std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string le(double x) { return "<= " + num(x); }
std::string ge(double x) { return ">= " + num(x); }

Engine case_engine(const ClaimContext& ctx, const char* stream) {
    return make_engine(derive_seed(ctx.seed, stream_tag(stream), 0));
}

double uniform(Engine& eng, double lo, double hi) { return lo + (hi - lo) * uniform01(eng); }

GeneratorSpec random_generator(Engine& eng, std::size_t kind) {
    switch (kind % 4) {
        case 0: return IidSpec{uniform(eng, 0.2, 0.8)};
        case 1: return MarkovSpec{uniform(eng, 0.2, 0.9), uniform(eng, 0.2, 0.9)};
        case 2: return BlockSpec{uniform(eng, 1.2, 2.5), std::nullopt};
        default: return GaussianSignsParams{uniform01(eng) < 0.5 ? 0.5 : 2.0};
    }
}

nlohmann::json fit_json(const LinearFit& f) {
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"slope_stderr", f.slope_stderr}, {"r2", f.r2}};
}

// ---------------------------------------------------------------------------

void exact_oracle(const ClaimContext& ctx, ClaimResult& r) {
    const RenewalLaw laws[2] = {build_renewal_law(0.5, 1024), build_renewal_law(2.0, 1024)};
    Engine eng = case_engine(ctx, "exact-oracle");
    double worst = 0.0;
    nlohmann::json cases = nlohmann::json::array();
    for (std::size_t i = 0; i < 50; ++i) {
        const RenewalLaw& law = laws[i % 2];
        const GeneratorSpec spec = random_generator(eng, i / 2);
        const std::size_t N = 1 + i % 14;
        const PinningParams p{uniform(eng, 0.0, 2.0), uniform(eng, -2.0, 1.0)};
        const BinaryEnvironment env = generate(spec, N, derive_seed(ctx.seed, stream_tag("exact-oracle-env"), i));
        const double dp = log_free_partition(law, env.site_span(N), p);
        const double bf = oracle::brute_force_log_partition(law.alpha(), env.site_span(N), p);
        worst = std::max(worst, std::abs(dp - bf));
        cases.push_back({{"alpha", law.alpha()}, {"generator", generator_to_json(spec)}, {"N", N},
                         {"beta", p.beta}, {"h", p.h}, {"dp", dp}, {"brute_force", bf}});
    }
    r.details["cases"] = cases;
    check(r, "max |logZ_dp - logZ_enum| over 50 cases", worst, le(1e-10), worst <= 1e-10);
}

void homogeneous_exponent(const ClaimContext&, ClaimResult& r) {
    std::vector<double> hs;
    for (int k = 0; k <= 20; ++k) hs.push_back(std::pow(10.0, -3.0 + 2.0 * k / 20.0));
    for (double alpha : {0.3, 0.5, 2.0}) {
        const RenewalLaw law = build_renewal_law(alpha, std::size_t{1} << 16);
        std::vector<double> x, y;
        for (double h : hs) {
            x.push_back(std::log(h));
            y.push_back(std::log(homogeneous_free_energy(law, h)));
        }
        const LinearFit fit = linear_fit(x, y);
        const double target = alpha < 1.0 ? 1.0 / alpha : 1.0;
        const double tol = alpha < 1.0 ? 0.05 : 0.02;
        const double rel = std::abs(fit.slope / target - 1.0);
        r.details["fits"].push_back({{"alpha", alpha}, {"fit", fit_json(fit)}});
        check(r, "alpha=" + num(alpha) + " slope " + num(fit.slope) + " relative error", rel,
              le(tol) + " (target " + num(target) + ")", rel <= tol);
    }
    const RenewalLaw law = build_renewal_law(0.5, std::size_t{1} << 16);
    const double h = 1e-3;
    const double ratio = homogeneous_free_energy(law, h) / (h * h);
    const double target = oracle::homogeneous_prefactor(0.5);
    const double rel = std::abs(ratio / target - 1.0);
    r.details["prefactor"] = {{"F_over_h2", ratio}, {"target", target}};
    check(r, "alpha=0.5 F(1e-3)/h^2 = " + num(ratio) + " relative error", rel,
          le(0.05) + " (target " + num(target) + ")", rel <= 0.05);
}

void finite_size_consistency(const ClaimContext&, ClaimResult& r) {
    const std::size_t N = std::size_t{1} << 14;
    const RenewalLaw law = build_renewal_law(0.5, N);
    const double bound = 5.0 * std::log(static_cast<double>(N)) / static_cast<double>(N);
    for (double h : {0.1, 0.3}) {
        const double fn = homogeneous_log_partition(law, h, N) / static_cast<double>(N);
        const double f = homogeneous_free_energy(law, h);
        r.details["rows"].push_back({{"h", h}, {"F_N", fn}, {"F", f}});
        check(r, "h=" + num(h) + " |F_N - F|", std::abs(fn - f), le(bound), std::abs(fn - f) <= bound);
    }
}

void pathwise_invariants(const ClaimContext& ctx, ClaimResult& r) {
    const RenewalLaw laws[2] = {build_renewal_law(0.5, 1024), build_renewal_law(1.5, 1024)};
    Engine eng = case_engine(ctx, "pathwise-invariants");
    auto env_for = [&](std::size_t i, std::size_t N, const char* stream) {
        return generate(random_generator(eng, i), N, derive_seed(ctx.seed, stream_tag(stream), i));
    };
    std::size_t bad_sandwich = 0, bad_super = 0, bad_convex = 0, bad_mono = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        const RenewalLaw& law = laws[i % 2];
        const auto N = static_cast<std::size_t>(uniform(eng, 16.0, 512.0));
        const PinningParams p{uniform(eng, 0.0, 2.0), uniform(eng, -3.0, 1.0)};
        const BinaryEnvironment env = env_for(i, N, "sandwich");
        const double z = log_free_partition(law, env.site_span(N), p);
        const double lo = homogeneous_log_partition(law, p.h - p.beta, N);
        const double hi = homogeneous_log_partition(law, p.h + p.beta, N);
        if (!(lo <= z && z <= hi)) ++bad_sandwich;
    }
    for (std::size_t i = 0; i < 100; ++i) {
        const RenewalLaw& law = laws[i % 2];
        const auto N1 = static_cast<std::size_t>(uniform(eng, 8.0, 256.0));
        const auto N2 = static_cast<std::size_t>(uniform(eng, 8.0, 256.0));
        const PinningParams p{uniform(eng, 0.0, 2.0), uniform(eng, -3.0, 1.0)};
        const BinaryEnvironment env = env_for(i, N1 + N2, "supermultiplicativity");
        const auto sites = env.site_span(N1 + N2);
        const PartitionOptions o{false, true};
        const double whole = pinned_partition(law, sites, p, o).logZpin[N1 + N2];
        const double left = pinned_partition(law, sites.first(N1), p, o).logZpin[N1];
        const double right = pinned_partition(law, sites.subspan(N1), p, o).logZpin[N2];
        if (!(whole >= left + right)) ++bad_super;
    }
    for (std::size_t i = 0; i < 100; ++i) {
        const RenewalLaw& law = laws[i % 2];
        const auto N = static_cast<std::size_t>(uniform(eng, 16.0, 512.0));
        const double beta = uniform(eng, 0.0, 2.0), h = uniform(eng, -2.5, 0.5), d = uniform(eng, 0.05, 0.5);
        const BinaryEnvironment env = env_for(i, N, "convexity");
        const auto sites = env.site_span(N);
        const double f0 = log_free_partition(law, sites, {beta, h - d});
        const double f1 = log_free_partition(law, sites, {beta, h});
        const double f2 = log_free_partition(law, sites, {beta, h + d});
        if (!(2.0 * f1 <= f0 + f2)) ++bad_convex;
    }
    for (std::size_t i = 0; i < 100; ++i) {
        const RenewalLaw& law = laws[i % 2];
        const auto N = static_cast<std::size_t>(uniform(eng, 16.0, 512.0));
        const PinningParams p{uniform(eng, 0.0, 2.0), uniform(eng, -3.0, 1.0)};
        const BinaryEnvironment env = env_for(i, N, "monotonicity");
        std::vector<std::int8_t> sites(env.site_span(N).begin(), env.site_span(N).end());
        std::vector<std::size_t> minus;
        for (std::size_t k = 0; k < N; ++k)
            if (sites[k] < 0) minus.push_back(k);
        const double before = log_free_partition(law, sites, p);
        if (minus.empty()) continue;
        sites[minus[static_cast<std::size_t>(uniform01(eng) * static_cast<double>(minus.size()))]] = 1;
        if (!(log_free_partition(law, sites, p) >= before)) ++bad_mono;
    }
    check(r, "sandwich violations / 100", static_cast<double>(bad_sandwich), "0", bad_sandwich == 0);
    check(r, "supermultiplicativity violations / 100", static_cast<double>(bad_super), "0", bad_super == 0);
    check(r, "convexity violations / 100", static_cast<double>(bad_convex), "0", bad_convex == 0);
    check(r, "omega-monotonicity violations / 100", static_cast<double>(bad_mono), "0", bad_mono == 0);
}

void sign_covariance(const ClaimContext& ctx, ClaimResult& r) {
    const GaussianSignsParams params{0.5};
    const std::size_t L = std::size_t{1} << 20;
    const BinaryEnvironment env = generate_gaussian_signs(params, L - 1, derive_seed(ctx.seed, stream_tag("sign-covariance"), 0));
    const auto& w = env.omega;
    // The mean is exactly 0 by symmetry, so the lag-k covariance is the mean product.
    // Standard errors from 32 contiguous batch means.
    const std::size_t batches = 32, span = L / batches;
    double worst = 0.0;
    for (std::size_t k = 1; k <= 64; ++k) {
        std::vector<double> means(batches);
        double total = 0.0;
        std::size_t count = 0;
        for (std::size_t b = 0; b < batches; ++b) {
            const std::size_t end = std::min((b + 1) * span, L - k);
            long s = 0;
            for (std::size_t i = b * span; i < end; ++i) s += w[i] * w[i + k];
            means[b] = static_cast<double>(s) / static_cast<double>(end - b * span);
            total += static_cast<double>(s);
            count += end - b * span;
        }
        const double cov = total / static_cast<double>(count);
        const double se = mean_stderr(means).std_err;
        const double target = oracle::arcsine_covariance(params.rho(k));
        const double z = std::abs(cov - target) / se;
        worst = std::max(worst, z);
        r.details["lags"].push_back({{"k", k}, {"cov", cov}, {"stderr", se}, {"target", target}});
    }
    check(r, "max |Cov_k - (2/pi)asin(rho_k)| / stderr over k <= 64", worst, le(4.0), worst <= 4.0);
}

void orthant_a05_part(const ClaimContext& ctx, ClaimResult& r) {
    const std::vector<std::size_t> ns{4, 8, 16, 32, 64};
    const ExponentFit f = exponent_fit(GaussianSignsParams{0.5}, ns, 100000, derive_seed(ctx.seed, stream_tag("orthant"), 5));
    r.details["a=0.5"] = to_json(f);
    check(r, "a=0.5 slope of log(-log p) vs log n", f.fit.slope, "in [0.35, 0.75]",
          f.fit.slope >= 0.35 && f.fit.slope <= 0.75 && f.dropped.empty());
}

void orthant_exponents(const ClaimContext& ctx, ClaimResult& r) {
    orthant_a05_part(ctx, r);
    const std::vector<std::size_t> ns{4, 8, 16, 32, 64};
    const ExponentFit f = exponent_fit(GaussianSignsParams{2.0}, ns, 100000, derive_seed(ctx.seed, stream_tag("orthant"), 20));
    r.details["a=2"] = to_json(f);
    check(r, "a=2 R^2 of -log p vs n", f.fit.r2, ge(0.98), f.fit.r2 >= 0.98 && f.dropped.empty());
    for (double a : {0.5, 2.0}) {
        const GaussianSignsParams params{a};
        const OrthantEstimate e = orthant_probability(params, 2, 100000, derive_seed(ctx.seed, stream_tag("orthant-n2"), a == 2.0));
        const double exact = std::log(oracle::arcsine_covariance(params.rho(1)) / 4.0 + 0.25);
        const double z = std::abs(e.log_p - exact) / e.std_err;
        r.details["n2"].push_back({{"a", a}, {"estimate", to_json(e)}, {"exact_log_p", exact}});
        check(r, "a=" + num(a) + " n=2 |log p - exact| / stderr", z, le(3.0), z <= 3.0);
    }
}

void regime_classification(const ClaimContext& ctx, ClaimResult& r) {
    const std::vector<std::size_t> sizes{2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512};
    struct Case {
        std::string name;
        GeneratorSpec spec;
        Regime expected;
    };
    const std::vector<Case> cases{{"gaussian a=0.5", GaussianSignsParams{0.5}, Regime::infinite_disorder},
                                  {"block theta=1.5", BlockSpec{1.5, std::nullopt}, Regime::infinite_disorder},
                                  {"markov q_pp=0.7", MarkovSpec{0.7, 0.7}, Regime::conventional},
                                  {"iid p=0.5", IidSpec{0.5}, Regime::conventional}};
    DiagnosticsOptions opts;
    opts.workers = ctx.workers;
    for (const Case& c : cases) {
        std::size_t hits = 0;
        nlohmann::json labels = nlohmann::json::array();
        for (std::size_t s = 0; s < 10; ++s) {
            const std::uint64_t root = derive_seed(ctx.seed, stream_tag("regime-classification"), s);
            const DisorderDiagnostics d = estimate_xi_tail(c.spec, sizes, 400'000, root, opts);
            labels.push_back(to_string(d.regime_label));
            if (d.regime_label == c.expected) ++hits;
        }
        r.details[c.name] = labels;
        check(r, c.name + " labelled " + to_string(c.expected) + " (of 10 seeds)", static_cast<double>(hits), ge(9),
              hits >= 9);
    }
}

void critical_gap(const ClaimContext& ctx, ClaimResult& r) {
    const std::size_t N = std::size_t{1} << 13;
    const RenewalLaw law = build_renewal_law(0.5, N);
    const std::vector<std::size_t> Ns{N};
    CriticalOptions opts;
    opts.workers = ctx.workers;
    const CriticalPointEstimate e = estimate_critical_point(law, MarkovSpec{0.7, 0.7}, 1.0, Ns, 64,
                                                            derive_seed(ctx.seed, stream_tag("critical-gap"), 0), opts);
    const double cb = annealed_gap_constant(-std::log(0.7), 1.0);
    const double target = -1.0 + cb / 2.0;
    r.details["estimate"] = to_json(e);
    r.details["c_beta"] = cb;
    check(r, "h_c_hat(N=2^13)", e.rows[0].h_c_hat, ge(target), e.rows[0].h_c_hat >= target);
}

void critical_collapse(const ClaimContext& ctx, ClaimResult& r) {
    const std::vector<std::size_t> Ns{std::size_t{1} << 11, std::size_t{1} << 13, std::size_t{1} << 15};
    const RenewalLaw law = build_renewal_law(0.5, Ns.back());
    const GaussianSignsParams spec{0.5};
    CriticalOptions opts;
    opts.workers = ctx.workers;
    const CriticalPointEstimate e =
        estimate_critical_point(law, spec, 1.0, Ns, 64, derive_seed(ctx.seed, stream_tag("critical-collapse"), 0), opts);
    r.details["estimate"] = to_json(e);
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (const auto& row : e.rows) {
        const double gap = row.h_c_hat + 1.0;
        check(r, "h_c_hat + 1 at N=" + std::to_string(row.N), gap, "> 0", gap > 0.0 && row.status == "crossing");
        decreasing = decreasing && gap < prev;
        prev = gap;
    }
    check(r, "h_c_hat + 1 strictly decreasing in N", decreasing ? 1.0 : 0.0, "1", decreasing);
    const FreeEnergyEstimate f = free_energy_estimate(law, spec, PinningParams{1.0, -0.5}, std::size_t{1} << 13, 64,
                                                      derive_seed(ctx.seed, stream_tag("critical-collapse"), 1), ctx.workers);
    r.details["F_beta1_h-0.5"] = to_json(f);
    check(r, "F_hat(1, -0.5) / stderr at N=2^13", f.value / f.std_err, "> 4", f.value > 4.0 * f.std_err);
}

void smoothing(const ClaimContext& ctx, ClaimResult& r) {
    const std::size_t N = std::size_t{1} << 15;
    const RenewalLaw law = build_renewal_law(2.0, N);
    const std::vector<double> u{0.4, 0.2, 0.1};
    BoundOptions opts;
    opts.workers = ctx.workers;
    const BoundCheckReport rep =
        smoothing_ratio_scan(law, BlockSpec{1.5, std::nullopt}, 1.0, u, N, 128, derive_seed(ctx.seed, stream_tag("smoothing"), 0), opts);
    r.details["report"] = to_json(rep);
    for (const auto& row : rep.rows)
        check(r, "ratio at u=" + num(row.u), row.ratio, "< 1", row.ratio < 1.0);
    check(r, "smallest gap between consecutive error bands (decreasing u)", rep.margin, "> 0", rep.margin > 0.0);
}

void annealed_identities(const ClaimContext& ctx, ClaimResult& r) {
    const RenewalLaw law = build_renewal_law(0.5, 4096);
    Engine eng = case_engine(ctx, "annealed-identities");
    double worst_iid = 0.0, worst_chain = 0.0;
    for (int i = 0; i < 20; ++i) {
        const PinningParams p{uniform(eng, 0.0, 2.0), uniform(eng, -2.0, 1.0)};
        const std::size_t N = 64 + static_cast<std::size_t>(uniform01(eng) * 960.0);
        const double exact = annealed_estimate(law, IidSpec{0.5}, p, N, 0, 0, AnnealedMode::exact).value;
        const double pure = homogeneous_log_partition(law, p.h + std::log(std::cosh(p.beta)), N) / static_cast<double>(N);
        // The fair two-state chain is the same law, run through the joint state transfer.
        const double chain = annealed_log_partition_state(law, MarkovSpec{0.5, 0.5}, p, N) / static_cast<double>(N);
        worst_iid = std::max(worst_iid, std::abs(exact - pure));
        worst_chain = std::max(worst_chain, std::abs(chain - pure));
    }
    check(r, "IID exact vs homogeneous at h + log cosh(beta), max abs diff", worst_iid, le(1e-12), worst_iid <= 1e-12);
    check(r, "fair Markov state transfer vs homogeneous at h + log cosh(beta)", worst_chain, le(1e-12),
          worst_chain <= 1e-12);

    std::size_t jensen_bad = 0, jensen_runs = 0, trivann_bad = 0, trivann_runs = 0;
    const std::vector<GeneratorSpec> specs{IidSpec{0.5}, MarkovSpec{0.7, 0.6}, BlockSpec{1.5, std::nullopt},
                                           GaussianSignsParams{0.5}};
    for (std::size_t g = 0; g < specs.size(); ++g) {
        for (int i = 0; i < 5; ++i) {
            const PinningParams p{uniform(eng, 0.2, 2.0), uniform(eng, -2.0, 0.5)};
            const std::size_t N = 256;
            const std::uint64_t seed = derive_seed(ctx.seed, stream_tag("annealed-mc"), g * 16 + static_cast<std::size_t>(i));
            const FreeEnergyEstimate ann = annealed_estimate(law, specs[g], p, N, 64, seed, AnnealedMode::monte_carlo, ctx.workers);
            const FreeEnergyEstimate q = free_energy_estimate(law, specs[g], p, N, 64, seed, ctx.workers);
            ++jensen_runs;
            if (!(ann.value >= q.value)) ++jensen_bad;
        }
    }
    const double log_nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < 20; ++i) {
        const PinningParams p{uniform(eng, 0.2, 2.0), uniform(eng, -2.0, 0.5)};
        for (std::size_t g : {0, 1, 2}) {
            const std::size_t N = g == 2 ? 14 : 128;
            const double ann = annealed_estimate(law, specs[g], p, N, 0, 0, AnnealedMode::exact).value;
            const auto tail = exact_xi_tail(specs[g], N + 1);
            const double rhs = (tail ? std::log(*tail) : log_nan) / static_cast<double>(N) +
                               homogeneous_log_partition(law, p.h + p.beta, N) / static_cast<double>(N);
            ++trivann_runs;
            if (!(ann >= rhs)) ++trivann_bad;
        }
    }
    check(r, "Jensen violations (annealed MC vs quenched mean) / " + std::to_string(jensen_runs),
          static_cast<double>(jensen_bad), "0", jensen_bad == 0);
    check(r, "all-attractive lower bound violations / " + std::to_string(trivann_runs), static_cast<double>(trivann_bad),
          "0", trivann_bad == 0);

    double worst_block = 0.0;
    for (int i = 0; i < 5; ++i) {
        const PinningParams p{uniform(eng, 0.0, 2.0), uniform(eng, -2.0, 1.0)};
        const BlockSpec spec{1.5, std::nullopt};
        const double state = annealed_log_partition_state(law, spec, p, 14);
        const double enumerated = annealed_log_partition_enumerated(law, spec, p, 14);
        worst_block = std::max(worst_block, std::abs(state - enumerated) / 14.0);
    }
    check(r, "block theta=1.5 N=14 state transfer vs 2^14-term enumeration", worst_block, le(1e-10), worst_block <= 1e-10);
}

void bound_structure(const ClaimContext& ctx, ClaimResult& r) {
    const std::size_t N = std::size_t{1} << 15;
    const RenewalLaw law = build_renewal_law(2.0, N);
    const BlockSpec spec{1.5, std::nullopt};
    BoundOptions opts;
    opts.workers = ctx.workers;
    opts.diag_samples = 4'000'000;
    const std::uint64_t seed = derive_seed(ctx.seed, stream_tag("bound-structure"), 0);
    const std::vector<double> lower_u{0.1, 0.2, 0.3, 0.4, 0.5};
    const BoundCheckReport lower = verify_lower_bound(law, spec, 1.0, lower_u, N, 128, seed, opts);
    r.details["lower"] = to_json(lower);
    check(r, "lower bound fitted margin on u in [0.1, 0.5]", lower.margin, ge(1.0), lower.pass);
    const std::vector<double> upper_u{0.1, 0.2, 0.4};
    const BoundCheckReport upper = verify_upper_bound_simple(law, spec, 1.0, upper_u, N, 128, seed, opts);
    r.details["upper"] = to_json(upper);
    check(r, "upper bound C1 refined / C1", upper.margin, "in [0.5, 2]", upper.pass);
}

void homogeneous_threshold(const ClaimContext&, ClaimResult& r) {
    const RenewalLaw law = build_renewal_law(0.5, std::size_t{1} << 18);
    const double h = 1e-3;
    const double F = homogeneous_free_energy(law, h);
    const auto n_top = static_cast<std::size_t>(std::floor(0.1 / F));
    const std::vector<double> excess = homogeneous_excess_partition(law, h, n_top);
    double c = 0.0;
    for (std::size_t n = 1; n <= n_top; ++n) c = std::max(c, excess[n] / std::sqrt(static_cast<double>(n) * F));
    r.details["F"] = F;
    r.details["n_top"] = n_top;
    check(r, "smallest c with Z_n - 1 <= c (n F)^(1/2) for n <= 0.1/F", c, le(10.0), c <= 10.0);
}

std::vector<ClaimInfo> build_registry() {
    return {
        {"exact-oracle", "AC-1", "transfer DP equals contact-subset enumeration, N <= 14", 60, exact_oracle},
        {"homogeneous-exponent", "AC-2", "homogeneous free energy exponent and prefactor", 10, homogeneous_exponent},
        {"finite-size-consistency", "AC-3", "|F_N - F| <= 5 log N / N at N = 2^14", 300, finite_size_consistency},
        {"pathwise-invariants", "AC-4", "sandwich, supermultiplicativity, convexity, monotonicity", 120,
         pathwise_invariants},
        {"sign-covariance", "AC-5", "Gaussian signs lag covariance vs arcsine law", 60, sign_covariance},
        {"orthant-exponents", "AC-6", "orthant decay exponents for a = 0.5 and a = 2", 300, orthant_exponents},
        {"orthant-a05", "AC-6", "stretched-exponential orthant exponent for a = 0.5", 300, orthant_a05_part},
        {"regime-classification", "AC-7", "regime labels over 10 root seeds", 300, regime_classification},
        {"critical-gap", "AC-8", "Markov critical point stays away from -beta", 600, critical_gap},
        {"critical-collapse", "AC-9", "Gaussian signs a = 0.5 critical gap shrinks with N", 1800, critical_collapse},
        {"smoothing", "AC-10", "block environment free-energy ratio decreases as u -> 0", 900, smoothing},
        {"annealed-identities", "AC-11", "annealed closed forms, Jensen and all-plus bounds", 600, annealed_identities},
        {"bound-structure", "AC-12", "fitted lower and simple upper bounds on the block environment", 1200,
         bound_structure},
        {"homogeneous-threshold", "AC-13", "Z_n - 1 <= c (n F)^(1/2) below the correlation length", 60,
         homogeneous_threshold},
    };
}

}  // namespace

const std::vector<ClaimInfo>& claim_registry() {
    static const std::vector<ClaimInfo> registry = build_registry();
    return registry;
}

const ClaimInfo* find_claim(const std::string& id) {
    for (const auto& c : claim_registry())
        if (c.id == id) return &c;
    return nullptr;
}

ClaimResult run_claim(const ClaimInfo& claim, const ClaimContext& ctx) {
    ClaimResult r;
    r.id = claim.id;
    r.criterion = claim.criterion;
    const auto start = std::chrono::steady_clock::now();
    claim.body(ctx, r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check(r, "runtime seconds", r.seconds, "< " + num(claim.budget_seconds), r.seconds < claim.budget_seconds);
    const bool ok = std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.ok; });
    r.verdict = ok ? Verdict::pass : Verdict::fail;
    return r;
}

nlohmann::json to_json(const ClaimResult& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"measured", format_double(c.measured)}, {"target", c.target}, {"ok", c.ok}});
    return {{"id", r.id},         {"criterion", r.criterion}, {"verdict", to_string(r.verdict)},
            {"checks", checks},   {"details", r.details},     {"seconds", r.seconds}};
}

}  // namespace pinlab
