#include "pinlab/partition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pinlab/stats.hpp"

namespace pinlab {

namespace {

constexpr int kRescaleExponent = 256;
constexpr double kLn2 = 0.69314718055994530942;

void check_size(const RenewalLaw& law, std::size_t N) {
    if (N == 0) throw std::invalid_argument("partition: N must be >= 1");
    if (N > law.n_max()) throw std::invalid_argument("partition: N exceeds the renewal table n_max");
}

}  // namespace

void validate(const PinningParams& p) {
    if (!std::isfinite(p.beta) || !std::isfinite(p.h)) throw std::invalid_argument("pinning: non-finite parameter");
    if (p.beta < 0.0) throw std::invalid_argument("pinning: beta must be >= 0");
    if (p.beta > 200.0 || std::abs(p.h) > 200.0) throw std::invalid_argument("pinning: |h| and beta must stay below 200");
}

PartitionTrace pinned_partition(const RenewalLaw& law, std::span<const std::int8_t> sites, const PinningParams& params,
                                const PartitionOptions& opts) {
    const std::size_t N = sites.size();
    check_size(law, N);
    validate(params);

    const std::size_t n_max = law.n_max();
    const double* krev = law.K_reversed();
    const double* kbrev = law.Kbar_reversed();

    std::vector<double> w(N + 1, 0.0);  // Z^pin[m] * 2^-exponent
    std::vector<double> v;              // w[m] * r[m], r = expected pinned contacts in (0, m]
    if (opts.contacts) v.assign(N + 1, 0.0);
    PartitionTrace trace;
    trace.N = N;
    if (opts.keep_pinned_table) trace.logZpin.assign(N + 1, 0.0);

    // Exact power-of-two rescaling: the scaled weights equal the true ones up
    // to a common factor 2^-exponent, whatever the rescaling schedule.
    long exponent = 0;
    const double reward_plus = std::exp(params.h + params.beta);
    const double reward_minus = std::exp(params.h - params.beta);
    w[0] = 1.0;
    for (std::size_t n = 1; n <= N; ++n) {
        const double* k = krev + (n_max - n);  // k[m] = K(n - m)
        const double* wp = w.data();
        double s = 0.0;
#pragma omp simd reduction(+ : s)
        for (std::size_t m = 0; m < n; ++m) s += wp[m] * k[m];
        const double wn = s * (sites[n - 1] > 0 ? reward_plus : reward_minus);

        double r = 0.0;
        if (opts.contacts) {
            const double* vp = v.data();
            double t = 0.0;
#pragma omp simd reduction(+ : t)
            for (std::size_t m = 0; m < n; ++m) t += vp[m] * k[m];
            r = 1.0 + t / s;
        }
        w[n] = wn;
        if (opts.contacts) v[n] = wn * r;
        if (std::ilogb(wn) > kRescaleExponent) {
            const int e = std::ilogb(wn);
            for (std::size_t m = 0; m <= n; ++m) w[m] = std::ldexp(w[m], -e);
            if (opts.contacts)
                for (std::size_t m = 0; m <= n; ++m) v[m] = std::ldexp(v[m], -e);
            exponent += e;
        }
        if (opts.keep_pinned_table) trace.logZpin[n] = std::log(w[n]) + static_cast<double>(exponent) * kLn2;
    }

    const double* kb = kbrev + (n_max - N);  // kb[m] = K̄(N - m)
    double zf = 0.0, cf = 0.0;
#pragma omp simd reduction(+ : zf)
    for (std::size_t m = 0; m <= N; ++m) zf += w[m] * kb[m];
    if (opts.contacts) {
#pragma omp simd reduction(+ : cf)
        for (std::size_t m = 0; m <= N; ++m) cf += v[m] * kb[m];
        trace.expected_contacts = cf / zf;
    }
    trace.logZfree = std::log(zf) + static_cast<double>(exponent) * kLn2;
    return trace;
}

PartitionTrace pinned_partition(const RenewalLaw& law, const BinaryEnvironment& env, const PinningParams& params,
                                std::size_t N, const PartitionOptions& opts) {
    return pinned_partition(law, env.site_span(N), params, opts);
}

double log_free_partition(const RenewalLaw& law, std::span<const std::int8_t> sites, const PinningParams& params) {
    return pinned_partition(law, sites, params, PartitionOptions{false, false}).logZfree;
}

double contact_fraction(const RenewalLaw& law, const BinaryEnvironment& env, const PinningParams& params, std::size_t N) {
    const PartitionTrace t = pinned_partition(law, env, params, N, PartitionOptions{true, false});
    return t.expected_contacts / static_cast<double>(N);
}

double homogeneous_log_partition(const RenewalLaw& law, double h, std::size_t N) {
    const std::vector<std::int8_t> plus(N, 1);
    return log_free_partition(law, plus, PinningParams{0.0, h});
}

std::uint64_t disorder_seed(std::uint64_t root, std::size_t index) {
    return derive_seed(root, stream_tag("disorder"), index);
}

FreeEnergyEstimate free_energy_on(const RenewalLaw& law, std::span<const BinaryEnvironment> envs,
                                  const PinningParams& params, std::size_t N, unsigned workers) {
    FreeEnergyEstimate est;
    est.N = N;
    est.samples = envs.size();
    est.per_sample.assign(envs.size(), 0.0);
    parallel_for(envs.size(), workers, [&](std::size_t i) {
        est.per_sample[i] = log_free_partition(law, envs[i].site_span(N), params) / static_cast<double>(N);
    });
    for (const auto& e : envs) est.seeds.push_back(e.seed);
    const MeanStderr ms = mean_stderr(est.per_sample);
    est.value = ms.mean;
    est.std_err = ms.std_err;
    return est;
}

FreeEnergyEstimate free_energy_estimate(const RenewalLaw& law, const GeneratorSpec& spec, const PinningParams& params,
                                        std::size_t N, std::size_t samples, std::uint64_t seed, unsigned workers) {
    if (samples < 1) throw std::invalid_argument("free_energy_estimate: need at least one sample");
    check_size(law, N);
    validate(params);
    validate(spec);
    std::vector<double> values(samples, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> failed(samples, 0);
    parallel_for(samples, workers, [&](std::size_t i) {
        try {
            const BinaryEnvironment env = generate(spec, N, disorder_seed(seed, i));
            values[i] = log_free_partition(law, env.site_span(N), params) / static_cast<double>(N);
        } catch (const GenerationError&) {
            failed[i] = 1;
        }
    });
    FreeEnergyEstimate est;
    est.N = N;
    for (std::size_t i = 0; i < samples; ++i) {
        if (failed[i]) {
            ++est.failures;
            continue;
        }
        est.per_sample.push_back(values[i]);
        est.seeds.push_back(disorder_seed(seed, i));
    }
    est.samples = est.per_sample.size();
    if (est.samples == 0) throw std::runtime_error("free_energy_estimate: every environment draw failed");
    const MeanStderr ms = mean_stderr(est.per_sample);
    est.value = ms.mean;
    est.std_err = ms.std_err;
    return est;
}

nlohmann::json to_json(const FreeEnergyEstimate& e) {
    return {{"value", e.value}, {"stderr", e.std_err}, {"N", e.N},          {"samples", e.samples},
            {"failures", e.failures}, {"heavy_tail", e.heavy_tail}, {"mode", e.mode}};
}

}  // namespace pinlab
