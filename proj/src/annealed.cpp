#include "pinlab/annealed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>
#include <vector>

#include "pinlab/stats.hpp"

namespace pinlab {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Environment as a finite-state chain started in `start`, emitting sign[s].
struct StateChain {
    std::size_t d = 0;
    std::vector<double> step;  // d×d row-major
    std::vector<std::int8_t> sign;
    std::size_t start = 0;
};

StateChain markov_chain(const MarkovSpec& s) {
    StateChain c;
    c.d = 2;
    c.step = {s.q_pp, 1.0 - s.q_pp, 1.0 - s.q_mm, s.q_mm};
    c.sign = {1, -1};
    c.start = 0;
    return c;
}

// States (σ, age) with age = sites already spent in the current block.
StateChain block_chain(const BlockSpec& s, std::size_t N) {
    StateChain c;
    const std::size_t ages = N + 1;
    c.d = 2 * ages;
    c.step.assign(c.d * c.d, 0.0);
    c.sign.resize(c.d);
    auto index = [&](int sgn, std::size_t age) { return (sgn == 1 ? 0 : ages) + age; };
    for (int sgn : {1, -1}) {
        const double theta = sgn == 1 ? s.theta : s.minus_exponent();
        for (std::size_t a = 0; a < ages; ++a) {
            const std::size_t from = index(sgn, a);
            c.sign[from] = static_cast<std::int8_t>(sgn);
            // P(size ≥ a+2 | size ≥ a+1)
            const double stay = std::pow((a + 2.0) / (a + 1.0), -theta);
            if (a + 1 < ages) c.step[from * c.d + index(sgn, a + 1)] = stay;
            c.step[from * c.d + index(-sgn, 0)] += 1.0 - stay;
        }
    }
    c.start = index(1, 0);
    return c;
}

double state_transfer(const RenewalLaw& law, const StateChain& c, const PinningParams& params, std::size_t N) {
    const std::size_t d = c.d;
    // powers[k] = step^k, k = 1..N
    std::vector<std::vector<double>> powers(N + 1);
    powers[1] = c.step;
    for (std::size_t k = 2; k <= N; ++k) {
        powers[k].assign(d * d, 0.0);
        const auto& prev = powers[k - 1];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t l = 0; l < d; ++l) {
                const double a = prev[i * d + l];
                if (a == 0.0) continue;
                for (std::size_t j = 0; j < d; ++j) powers[k][i * d + j] += a * c.step[l * d + j];
            }
    }
    std::vector<double> reward(d);
    for (std::size_t s = 0; s < d; ++s) reward[s] = std::exp(params.h + params.beta * c.sign[s]);

    // A[m][s]: weight of a contact at m with the environment in state s there.
    std::vector<std::vector<double>> A(N + 1, std::vector<double>(d, 0.0));
    A[0][c.start] = 1.0;
    long exponent = 0;
    for (std::size_t n = 1; n <= N; ++n) {
        std::vector<double>& cur = A[n];
        for (std::size_t m = 0; m < n; ++m) {
            const double k = law.K(n - m);
            const auto& P = powers[n - m];
            for (std::size_t i = 0; i < d; ++i) {
                const double a = A[m][i] * k;
                if (a == 0.0) continue;
                for (std::size_t j = 0; j < d; ++j) cur[j] += a * P[i * d + j];
            }
        }
        double top = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            cur[j] *= reward[j];
            top = std::max(top, cur[j]);
        }
        if (std::ilogb(top) > 256) {
            const int e = std::ilogb(top);
            for (std::size_t m = 0; m <= n; ++m)
                for (double& x : A[m]) x = std::ldexp(x, -e);
            exponent += e;
        }
    }
    double z = 0.0;
    for (std::size_t m = 0; m <= N; ++m) {
        double mass = 0.0;
        for (double x : A[m]) mass += x;
        z += mass * law.Kbar(N - m);
    }
    return std::log(z) + static_cast<double>(exponent) * kLn2;
}

FreeEnergyEstimate exact_result(double log_z, std::size_t N, const char* mode) {
    FreeEnergyEstimate e;
    e.value = log_z / static_cast<double>(N);
    e.N = N;
    e.samples = 0;
    e.mode = mode;
    return e;
}

std::vector<double> sample_log_z(const RenewalLaw& law, const GeneratorSpec& spec, const PinningParams& params,
                                 std::size_t N, std::size_t samples, std::uint64_t seed, unsigned workers,
                                 std::size_t& failures) {
    std::vector<double> logz(samples, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> failed(samples, 0);
    parallel_for(samples, workers, [&](std::size_t i) {
        try {
            const BinaryEnvironment env = generate(spec, N, disorder_seed(seed, i));
            logz[i] = log_free_partition(law, env.site_span(N), params);
        } catch (const GenerationError&) {
            failed[i] = 1;
        }
    });
    std::vector<double> out;
    failures = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        if (failed[i])
            ++failures;
        else
            out.push_back(logz[i]);
    }
    if (out.empty()) throw std::runtime_error("annealed: every environment draw failed");
    return out;
}

}  // namespace

double iid_tilt(double p_plus, double beta) {
    return p_plus * std::exp(beta) + (1.0 - p_plus) * std::exp(-beta);
}

double annealed_log_partition_state(const RenewalLaw& law, const GeneratorSpec& spec, const PinningParams& params,
                                    std::size_t N) {
    validate(params);
    if (N == 0 || N > law.n_max()) throw std::invalid_argument("annealed: N out of range");
    if (const auto* m = std::get_if<MarkovSpec>(&spec)) return state_transfer(law, markov_chain(*m), params, N);
    if (const auto* b = std::get_if<BlockSpec>(&spec)) {
        if (N > 64) throw std::invalid_argument("annealed: block state transfer limited to N <= 64");
        return state_transfer(law, block_chain(*b, N), params, N);
    }
    throw std::invalid_argument("annealed: state transfer needs a Markov or block generator");
}

double annealed_log_partition_enumerated(const RenewalLaw& law, const GeneratorSpec& spec, const PinningParams& params,
                                         std::size_t N) {
    if (N == 0 || N > 14) throw std::invalid_argument("annealed: enumeration limited to 1 <= N <= 14");
    std::vector<std::int8_t> pattern(N);
    std::vector<double> terms;
    terms.reserve(std::size_t{1} << N);
    for (std::size_t bits = 0; bits < (std::size_t{1} << N); ++bits) {
        for (std::size_t i = 0; i < N; ++i) pattern[i] = (bits >> i) & 1U ? 1 : -1;
        const auto p = prefix_probability(spec, pattern);
        if (!p) throw std::invalid_argument("annealed: generator has no closed-form prefix law");
        if (*p <= 0.0) continue;
        terms.push_back(std::log(*p) + log_free_partition(law, pattern, params));
    }
    return log_sum_exp(terms);
}

FreeEnergyEstimate annealed_estimate(const RenewalLaw& law, const GeneratorSpec& spec, const PinningParams& params,
                                     std::size_t N, std::size_t samples, std::uint64_t seed, AnnealedMode mode,
                                     unsigned workers) {
    validate(spec);
    validate(params);
    if (N == 0 || N > law.n_max()) throw std::invalid_argument("annealed: N out of range");
    const auto* iid = std::get_if<IidSpec>(&spec);
    const auto* gauss = std::get_if<GaussianSignsParams>(&spec);
    const double p_iid = iid ? iid->p_plus : (gauss && gauss->independent() ? 0.5 : -1.0);

    if (mode == AnnealedMode::automatic) {
        if (p_iid > 0.0 || (std::holds_alternative<MarkovSpec>(spec) && N <= (std::size_t{1} << 14)))
            mode = AnnealedMode::exact;
        else
            mode = AnnealedMode::monte_carlo;
    }
    switch (mode) {
        case AnnealedMode::exact:
            if (p_iid > 0.0) {
                const double h_eff = params.h + std::log(iid_tilt(p_iid, params.beta));
                return exact_result(homogeneous_log_partition(law, h_eff, N), N, "exact-iid");
            }
            return exact_result(annealed_log_partition_state(law, spec, params, N), N, "exact-state");
        case AnnealedMode::enumeration:
            return exact_result(annealed_log_partition_enumerated(law, spec, params, N), N, "enumeration");
        case AnnealedMode::monte_carlo:
        case AnnealedMode::automatic: break;
    }
    if (samples < 1) throw std::invalid_argument("annealed: need at least one sample");
    FreeEnergyEstimate e;
    const std::vector<double> logz = sample_log_z(law, spec, params, N, samples, seed, workers, e.failures);
    const LogMean lm = log_mean_exp(logz);
    const double n = static_cast<double>(N);
    e.value = lm.log_mean / n;
    e.std_err = lm.std_err / n;
    e.heavy_tail = lm.max_share > 0.5;
    e.N = N;
    e.samples = logz.size();
    e.mode = "mc";
    for (double x : logz) e.per_sample.push_back(x / n);
    return e;
}

FreeEnergyEstimate inverse_partition_estimate(const RenewalLaw& law, const GeneratorSpec& spec,
                                              const PinningParams& params, std::size_t N, std::size_t samples,
                                              std::uint64_t seed, unsigned workers) {
    validate(spec);
    validate(params);
    if (N == 0 || N > law.n_max()) throw std::invalid_argument("inverse partition: N out of range");
    if (samples < 1) throw std::invalid_argument("inverse partition: need at least one sample");
    FreeEnergyEstimate e;
    std::vector<double> logz = sample_log_z(law, spec, params, N, samples, seed, workers, e.failures);
    const double n = static_cast<double>(N);
    for (double x : logz) e.per_sample.push_back(x / n);
    for (double& x : logz) x = -x;
    const LogMean lm = log_mean_exp(logz);
    e.value = -lm.log_mean / n;
    e.std_err = lm.std_err / n;
    e.heavy_tail = lm.max_share > 0.5;
    e.N = N;
    e.samples = logz.size();
    e.mode = "mc";
    return e;
}

}  // namespace pinlab
