#include "pinlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>

#include "pinlab/claims.hpp"
#include "pinlab/criticality.hpp"
#include "pinlab/diagnostics.hpp"
#include "pinlab/io.hpp"
#include "pinlab/orthant.hpp"
#include "pinlab/partition.hpp"
#include "pinlab/renewal.hpp"
#include "pinlab/rng.hpp"
#include "pinlab/stats.hpp"

namespace pinlab {

namespace {

constexpr const char* kVersion = "0.1.0";

const std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::free_energy_sweep, "free-energy-sweep"},
    {ExperimentKind::critical_point, "critical-point"},
    {ExperimentKind::env_diagnostics, "env-diagnostics"},
    {ExperimentKind::orthant, "orthant"},
    {ExperimentKind::bound_check, "bound-check"},
    {ExperimentKind::criterion, "criterion"},
    {ExperimentKind::reproduce, "reproduce"},
};

std::set<std::string> allowed_keys(ExperimentKind k) {
    std::set<std::string> keys{"kind", "seed", "out"};
    auto add = [&](std::initializer_list<const char*> more) { keys.insert(more.begin(), more.end()); };
    switch (k) {
        case ExperimentKind::free_energy_sweep: add({"alpha", "n_max", "generator", "beta", "h", "N", "samples"}); break;
        case ExperimentKind::critical_point: add({"alpha", "n_max", "generator", "beta", "N", "samples"}); break;
        case ExperimentKind::env_diagnostics: add({"generator", "n", "samples"}); break;
        case ExperimentKind::orthant: add({"generator", "n", "samples"}); break;
        case ExperimentKind::bound_check:
            add({"alpha", "n_max", "generator", "beta", "u", "N", "samples", "bound", "band_z"});
            break;
        case ExperimentKind::criterion: add({"alpha", "n_max", "generator", "beta", "N", "samples", "n"}); break;
        case ExperimentKind::reproduce: add({"claim"}); break;
    }
    return keys;
}

/// Keys that must be present; the rest of allowed_keys are optional.
std::set<std::string> required_keys(ExperimentKind k) {
    std::set<std::string> keys = allowed_keys(k);
    for (const char* opt : {"seed", "out", "n_max", "band_z"}) keys.erase(opt);
    if (k == ExperimentKind::criterion) keys.erase("n");
    return keys;
}

bool multi_generator(ExperimentKind k) {
    return k == ExperimentKind::free_energy_sweep || k == ExperimentKind::critical_point ||
           k == ExperimentKind::criterion;
}

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

std::size_t max_N(const ExperimentConfig& c) { return c.N.empty() ? 1 : *std::max_element(c.N.begin(), c.N.end()); }

RenewalLaw law_for(const ExperimentConfig& c) { return build_renewal_law(c.alpha, c.n_max.value_or(max_N(c))); }

std::string params_text(const GeneratorSpec& spec) { return generator_label(spec); }

struct Outcome {
    int code = exit_pass;
    std::string csv;
    std::string summary;
    nlohmann::json seeds = nlohmann::json::object();
    nlohmann::json details = nlohmann::json::object();
};

Outcome run_sweep(const ExperimentConfig& c, unsigned workers) {
    const RenewalLaw law = law_for(c);
    const std::size_t top = max_N(c);
    std::vector<SweepRow> rows;
    std::ostringstream sum;
    Outcome o;
    for (std::size_t g = 0; g < c.generators.size(); ++g) {
        const GeneratorSpec& spec = c.generators[g];
        const std::uint64_t root = derive_seed(c.seed, stream_tag("sweep"), g);
        o.seeds["sweep"].push_back(root);
        // Row blocks per environment are filled independently and concatenated by index.
        const std::size_t per_env = c.beta.size() * c.h.size() * c.N.size();
        std::vector<SweepRow> block(per_env * c.samples);
        parallel_for(c.samples, workers, [&](std::size_t i) {
            const std::uint64_t env_seed = disorder_seed(root, i);
            const BinaryEnvironment env = generate(spec, top, env_seed);
            std::size_t k = i * per_env;
            for (double beta : c.beta)
                for (double h : c.h)
                    for (std::size_t N : c.N) {
                        const PartitionTrace t = pinned_partition(law, env.site_span(N), {beta, h}, {true, false});
                        block[k++] = SweepRow{generator_id(spec), params_text(spec), beta, h, N, env_seed,
                                              t.logZfree, t.logZfree / static_cast<double>(N),
                                              t.expected_contacts / static_cast<double>(N)};
                    }
        });
        for (double beta : c.beta)
            for (double h : c.h)
                for (std::size_t N : c.N) {
                    std::vector<double> f;
                    for (const SweepRow& r : block)
                        if (r.beta == beta && r.h == h && r.N == N) f.push_back(r.F_N);
                    const MeanStderr m = mean_stderr(f);
                    sum << generator_id(spec) << '(' << params_text(spec) << ") beta=" << format_double(beta)
                        << " h=" << format_double(h) << " N=" << N << ": F_N = " << format_double(m.mean) << " +- "
                        << format_double(m.std_err) << '\n';
                }
        rows.insert(rows.end(), block.begin(), block.end());
    }
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    o.csv = csv.str();
    o.summary = sum.str();
    return o;
}

const std::vector<std::string> kCriticalHeader{"generator", "params", "beta", "N", "threshold", "h_c_hat",
                                               "bracket_lo", "bracket_hi", "status", "environments", "evaluations"};

void critical_rows(std::ostringstream& csv, const GeneratorSpec& spec, const CriticalPointEstimate& e) {
    for (const CriticalRow& r : e.rows) {
        const std::vector<std::string> f{generator_id(spec),       params_text(spec),       format_double(e.beta),
                                         std::to_string(r.N),      format_double(r.threshold), format_double(r.h_c_hat),
                                         format_double(r.bracket_lo), format_double(r.bracket_hi), r.status,
                                         std::to_string(r.environments), std::to_string(r.evaluations)};
        csv << csv_line(f);
    }
}

Outcome run_critical(const ExperimentConfig& c, unsigned workers) {
    const RenewalLaw law = law_for(c);
    CriticalOptions opts;
    opts.workers = workers;
    Outcome o;
    std::ostringstream csv, sum;
    csv << csv_line(kCriticalHeader);
    for (std::size_t g = 0; g < c.generators.size(); ++g) {
        for (std::size_t b = 0; b < c.beta.size(); ++b) {
            const std::uint64_t seed = derive_seed(c.seed, stream_tag("critical-point"), g * c.beta.size() + b);
            o.seeds["critical-point"].push_back(seed);
            const CriticalPointEstimate e =
                estimate_critical_point(law, c.generators[g], c.beta[b], c.N, c.samples, seed, opts);
            critical_rows(csv, c.generators[g], e);
            sum << generator_id(c.generators[g]) << '(' << params_text(c.generators[g])
                << ") beta=" << format_double(c.beta[b]) << ": trend " << e.trend << '\n';
            for (const CriticalRow& r : e.rows)
                sum << "  N=" << r.N << " h_c_hat=" << format_double(r.h_c_hat) << " (" << r.status << ")\n";
        }
    }
    o.csv = csv.str();
    o.summary = sum.str();
    return o;
}

Outcome run_diagnostics(const ExperimentConfig& c, unsigned workers) {
    DiagnosticsOptions opts;
    opts.workers = workers;
    Outcome o;
    const std::uint64_t seed = derive_seed(c.seed, stream_tag("env-diagnostics"), 0);
    o.seeds["env-diagnostics"] = seed;
    const DisorderDiagnostics d = estimate_xi_tail(c.generators[0], c.n, c.samples, seed, opts);
    std::ostringstream csv;
    write_diagnostics_csv(csv, d);
    o.csv = csv.str();
    o.details = to_json(d);
    o.summary = "regime: " + to_string(d.regime_label) + "\n";
    if (d.resolution_limit) o.summary += "resolution limit: n = " + std::to_string(*d.resolution_limit) + "\n";
    if (d.regime_label == Regime::undetermined) o.code = exit_inconclusive;
    return o;
}

Outcome run_orthant(const ExperimentConfig& c, unsigned workers) {
    const auto& params = std::get<GaussianSignsParams>(c.generators[0]);
    Outcome o;
    std::vector<OrthantEstimate> rows(c.n.size());
    std::vector<std::uint64_t> seeds(c.n.size());
    for (std::size_t i = 0; i < c.n.size(); ++i) seeds[i] = derive_seed(c.seed, stream_tag("orthant"), c.n[i]);
    parallel_for(c.n.size(), workers, [&](std::size_t i) { rows[i] = orthant_probability(params, c.n[i], c.samples, seeds[i]); });
    o.seeds["orthant"] = seeds;
    std::ostringstream csv, sum;
    write_orthant_csv(csv, params.a, rows);
    for (const OrthantEstimate& e : rows) {
        sum << "n=" << e.n << " log p = " << format_double(e.log_p) << " +- " << format_double(e.std_err)
            << " (ess " << format_double(e.ess) << ")\n";
        if (e.collapsed()) o.code = exit_inconclusive;
    }
    o.csv = csv.str();
    o.summary = sum.str();
    return o;
}

Outcome run_bound(const ExperimentConfig& c, unsigned workers) {
    const RenewalLaw law = law_for(c);
    BoundOptions opts;
    opts.workers = workers;
    opts.diag.workers = workers;
    opts.band_z = c.band_z;
    Outcome o;
    const std::uint64_t seed = derive_seed(c.seed, stream_tag("bound-check"), 0);
    o.seeds["bound-check"] = seed;
    const GeneratorSpec& spec = c.generators[0];
    BoundCheckReport r;
    if (c.bound == "smoothing")
        r = smoothing_ratio_scan(law, spec, c.beta[0], c.u, c.N[0], c.samples, seed, opts);
    else if (c.bound == "lower")
        r = verify_lower_bound(law, spec, c.beta[0], c.u, c.N[0], c.samples, seed, opts);
    else
        r = verify_upper_bound_simple(law, spec, c.beta[0], c.u, c.N[0], c.samples, seed, opts);
    std::ostringstream csv, sum;
    write_bound_csv(csv, r);
    sum << r.kind << ": margin " << format_double(r.margin) << ", " << (r.pass ? "pass" : "fail") << '\n';
    for (const auto& [k, v] : r.constants) sum << "  " << k << " = " << format_double(v) << '\n';
    for (const auto& w : r.warnings) sum << "  warning: " << w << '\n';
    o.csv = csv.str();
    o.summary = sum.str();
    o.details = to_json(r);
    o.code = r.pass ? exit_pass : (std::isnan(r.margin) ? exit_inconclusive : exit_fail);
    return o;
}

Outcome run_criterion(const ExperimentConfig& c, unsigned workers) {
    const RenewalLaw law = law_for(c);
    CriterionOptions opts;
    opts.N_list = c.N;
    opts.samples = c.samples;
    opts.diag_n = c.n;
    opts.diag.workers = workers;
    opts.critical.workers = workers;
    Outcome o;
    std::ostringstream csv, sum;
    std::vector<std::string> header{"label", "verdict", "c0", "c_beta"};
    header.insert(header.begin(), kCriticalHeader.begin(), kCriticalHeader.end());
    csv << csv_line(header);
    bool inconsistent = false, inconclusive = false;
    for (std::size_t g = 0; g < c.generators.size(); ++g) {
        const GeneratorSpec& spec = c.generators[g];
        const std::uint64_t seed = derive_seed(c.seed, stream_tag("criterion"), g);
        o.seeds["criterion"].push_back(seed);
        const CriterionReport r = criterion_end_to_end(law, spec, c.beta, seed, opts);
        o.details["reports"].push_back(to_json(r));
        const std::string label = to_string(r.diagnostics.regime_label);
        for (std::size_t b = 0; b < r.estimates.size(); ++b) {
            std::ostringstream part;
            critical_rows(part, spec, r.estimates[b]);
            // Append the criterion columns to each critical row.
            std::istringstream lines(part.str());
            for (std::string line; std::getline(lines, line);)
                csv << line << ',' << csv_line(std::vector<std::string>{label, r.verdict, format_double(r.c0),
                                                                         format_double(r.c_beta[b])});
        }
        if (r.estimates.empty()) {
            std::vector<std::string> f{generator_id(spec), params_text(spec)};
            f.resize(kCriticalHeader.size());
            f.insert(f.end(), {label, r.verdict, format_double(r.c0), ""});
            csv << csv_line(f);
        }
        sum << generator_id(spec) << '(' << params_text(spec) << "): " << label << ", " << r.verdict << " -- "
            << r.detail << '\n';
        inconsistent = inconsistent || r.verdict == "inconsistent";
        inconclusive = inconclusive || r.verdict == "inconclusive";
    }
    o.csv = csv.str();
    o.summary = sum.str();
    o.code = inconsistent ? exit_fail : inconclusive ? exit_inconclusive : exit_pass;
    return o;
}

Outcome run_reproduce(const ExperimentConfig& c, unsigned workers) {
    const ClaimInfo* claim = find_claim(c.claim);
    const ClaimResult r = run_claim(*claim, ClaimContext{c.seed, workers});
    Outcome o;
    o.seeds["claim"] = c.seed;
    std::ostringstream csv, sum;
    csv << csv_line(std::vector<std::string>{"claim", "criterion", "check", "measured", "target", "ok"});
    sum << r.id << " (" << r.criterion << "): " << to_string(r.verdict) << '\n';
    for (const Check& ch : r.checks) {
        csv << csv_line(std::vector<std::string>{r.id, r.criterion, ch.name, format_double(ch.measured), ch.target,
                                                 ch.ok ? "true" : "false"});
        sum << "  [" << (ch.ok ? "ok" : "FAIL") << "] " << ch.name << ": " << format_double(ch.measured) << " (target "
            << ch.target << ")\n";
    }
    o.csv = csv.str();
    o.summary = sum.str();
    o.details = to_json(r);
    o.code = r.verdict == Verdict::pass ? exit_pass : r.verdict == Verdict::fail ? exit_fail : exit_inconclusive;
    return o;
}

nlohmann::json versions() {
    return {{"pinlab", kVersion},
            {"compiler", __VERSION__},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"boost", BOOST_LIB_VERSION},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

}  // namespace

std::string to_string(ExperimentKind k) {
    for (const auto& [kind, name] : kKindNames)
        if (kind == k) return name;
    return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    for (const auto& [kind, name] : kKindNames)
        if (s == name) return kind;
    fail("unknown experiment kind \"" + s + "\"");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) fail("config: JSON object expected");
    if (!j.contains("kind") || !j.at("kind").is_string()) fail("config: missing string key \"kind\"");
    ExperimentConfig c;
    c.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
    const auto allowed = allowed_keys(c.kind);
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key)) fail("config: unknown key \"" + key + "\" for kind " + to_string(c.kind));
    for (const auto& key : required_keys(c.kind))
        if (!j.contains(key)) fail("config: missing key \"" + key + "\" for kind " + to_string(c.kind));
    try {
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out")) c.out = j.at("out").get<std::string>();
        if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
        if (j.contains("n_max")) c.n_max = j.at("n_max").get<std::size_t>();
        if (j.contains("generator")) {
            const auto& g = j.at("generator");
            if (g.is_array())
                for (const auto& x : g) c.generators.push_back(generator_from_json(x));
            else
                c.generators.push_back(generator_from_json(g));
        }
        if (j.contains("beta")) c.beta = j.at("beta").get<std::vector<double>>();
        if (j.contains("h")) c.h = j.at("h").get<std::vector<double>>();
        if (j.contains("u")) c.u = j.at("u").get<std::vector<double>>();
        if (j.contains("N")) c.N = j.at("N").get<std::vector<std::size_t>>();
        if (j.contains("samples")) c.samples = j.at("samples").get<std::size_t>();
        if (j.contains("n")) c.n = j.at("n").get<std::vector<std::size_t>>();
        if (j.contains("bound")) c.bound = j.at("bound").get<std::string>();
        if (j.contains("band_z")) c.band_z = j.at("band_z").get<double>();
        if (j.contains("claim")) c.claim = j.at("claim").get<std::string>();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail(std::string("config: ") + e.what());
    }
    validate(c);
    return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j{{"kind", to_string(c.kind)}, {"seed", c.seed}};
    if (!c.out.empty()) j["out"] = c.out;
    const auto allowed = allowed_keys(c.kind);
    auto put = [&](const char* key, const nlohmann::json& v) {
        if (allowed.count(key)) j[key] = v;
    };
    put("alpha", c.alpha);
    if (c.n_max) put("n_max", *c.n_max);
    if (allowed.count("generator")) {
        nlohmann::json g = nlohmann::json::array();
        for (const auto& s : c.generators) g.push_back(generator_to_json(s));
        j["generator"] = g.size() == 1 ? g[0] : g;
    }
    put("beta", c.beta);
    put("h", c.h);
    put("u", c.u);
    put("N", c.N);
    put("samples", c.samples);
    if (c.kind != ExperimentKind::criterion || !c.n.empty()) put("n", c.n);
    put("bound", c.bound);
    put("band_z", c.band_z);
    put("claim", c.claim);
    return j;
}

void validate(const ExperimentConfig& c) {
    const auto allowed = allowed_keys(c.kind);
    auto wants = [&](const char* key) { return required_keys(c.kind).count(key) > 0; };
    if (c.kind == ExperimentKind::reproduce) {
        if (!find_claim(c.claim)) {
            std::string ids;
            for (const auto& info : claim_registry()) ids += " " + info.id;
            fail("unknown claim \"" + c.claim + "\"; available:" + ids);
        }
        return;
    }
    if (c.generators.empty()) fail("config: at least one generator required");
    if (c.generators.size() > 1 && !multi_generator(c.kind))
        fail("config: kind " + to_string(c.kind) + " takes a single generator");
    for (const auto& g : c.generators) {
        try {
            validate(g);
        } catch (const std::exception& e) {
            fail(std::string("config: ") + e.what());
        }
    }
    if (c.samples == 0) fail("config: samples must be positive");
    if (allowed.count("alpha") && !(c.alpha > 0.0 && std::isfinite(c.alpha))) fail("config: alpha must be positive");
    if (wants("N")) {
        if (c.N.empty()) fail("config: N list is empty");
        for (std::size_t N : c.N)
            if (N == 0) fail("config: N must be positive");
        if (c.n_max && *c.n_max < max_N(c)) fail("config: n_max below the largest N");
    }
    if (wants("beta")) {
        if (c.beta.empty()) fail("config: beta list is empty");
        for (double b : c.beta)
            if (!(b >= 0.0 && std::isfinite(b))) fail("config: beta must be finite and non-negative");
    }
    if (wants("h")) {
        if (c.h.empty()) fail("config: h list is empty");
        for (double h : c.h)
            if (!std::isfinite(h)) fail("config: h must be finite");
    }
    if (wants("n")) {
        if (c.n.empty()) fail("config: n list is empty");
    }
    for (std::size_t n : c.n)
        if (n == 0) fail("config: n values must be positive");
    if (c.kind == ExperimentKind::orthant) {
        const auto* g = std::get_if<GaussianSignsParams>(&c.generators[0]);
        if (!g || g->independent()) fail("config: orthant needs a gaussian-signs generator with finite a");
    }
    if (c.kind == ExperimentKind::bound_check) {
        if (c.beta.size() != 1) fail("config: bound-check takes exactly one beta");
        if (c.N.size() != 1) fail("config: bound-check takes exactly one N");
        if (c.u.empty()) fail("config: u list is empty");
        for (double u : c.u)
            if (!(u > 0.0 && std::isfinite(u))) fail("config: u must be positive");
        if (c.bound != "smoothing" && c.bound != "lower" && c.bound != "upper")
            fail("config: bound must be smoothing, lower or upper");
        if (c.bound == "upper")
            for (double u : c.u)
                if (u >= c.beta[0]) fail("config: upper bound needs u < beta");
        if (!(c.band_z >= 0.0 && std::isfinite(c.band_z))) fail("config: band_z must be non-negative");
    }
}

int run(ExperimentConfig config, const RunOptions& opts) {
    if (opts.seed) config.seed = *opts.seed;
    if (opts.out) config.out = *opts.out;
    validate(config);
    if (config.out.empty()) fail("no output directory: set \"out\" or pass --out");
    const unsigned workers = std::max(1u, opts.workers);
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    switch (config.kind) {
        case ExperimentKind::free_energy_sweep: o = run_sweep(config, workers); break;
        case ExperimentKind::critical_point: o = run_critical(config, workers); break;
        case ExperimentKind::env_diagnostics: o = run_diagnostics(config, workers); break;
        case ExperimentKind::orthant: o = run_orthant(config, workers); break;
        case ExperimentKind::bound_check: o = run_bound(config, workers); break;
        case ExperimentKind::criterion: o = run_criterion(config, workers); break;
        case ExperimentKind::reproduce: o = run_reproduce(config, workers); break;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::filesystem::path dir(config.out);
    std::filesystem::create_directories(dir);
    const char* verdicts[] = {"pass", "fail", "inconclusive"};
    const nlohmann::json manifest{{"config", config_to_json(config)},
                                  {"root_seed", config.seed},
                                  {"derived_seeds", o.seeds},
                                  {"workers", workers},
                                  {"versions", versions()},
                                  {"wall_seconds", wall},
                                  {"exit_code", o.code},
                                  {"verdict", verdicts[o.code]},
                                  {"details", o.details}};
    std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
    std::ofstream(dir / "results.csv", std::ios::binary) << o.csv;
    std::ofstream(dir / "summary.txt") << to_string(config.kind) << " (seed " << config.seed << ")\n"
                                       << o.summary << "verdict: " << verdicts[o.code] << '\n';
    return o.code;
}

}  // namespace pinlab
