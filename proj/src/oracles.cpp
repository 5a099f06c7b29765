#include "pinlab/oracles.hpp"

#include <cmath>
#include <bit>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

namespace pinlab::oracle {

double K(double alpha, std::size_t n) {
    if (n == 0) return 0.0;
    return std::pow(static_cast<double>(n), -(1.0 + alpha)) / boost::math::zeta(1.0 + alpha);
}

double Kbar(double alpha, std::size_t n) {
    double mass = 0.0;
    for (std::size_t k = 1; k <= n; ++k) mass += K(alpha, k);
    return 1.0 - mass;
}

double brute_force_log_partition(double alpha, std::span<const std::int8_t> sites, const PinningParams& params,
                                 bool free_boundary) {
    const std::size_t N = sites.size();
    if (N == 0 || N > 20) throw std::invalid_argument("brute force: need 1 <= N <= 20");
    double z = 0.0;
    for (std::uint32_t mask = 0; mask < (1U << N); ++mask) {
        if (!free_boundary && !(mask >> (N - 1) & 1U)) continue;
        double weight = 1.0;
        double energy = 0.0;
        std::size_t last = 0;
        for (std::size_t i = 1; i <= N; ++i) {
            if (!(mask >> (i - 1) & 1U)) continue;
            weight *= K(alpha, i - last);
            energy += params.h + params.beta * sites[i - 1];
            last = i;
        }
        if (free_boundary) weight *= Kbar(alpha, N - last);
        z += weight * std::exp(energy);
    }
    return std::log(z);
}

double pattern_probability(const GeneratorSpec& spec, std::span<const std::int8_t> pattern) {
    if (const auto* s = std::get_if<IidSpec>(&spec)) {
        double p = 1.0;
        for (auto x : pattern) p *= x > 0 ? s->p_plus : 1.0 - s->p_plus;
        return p;
    }
    if (const auto* s = std::get_if<MarkovSpec>(&spec)) {
        // Transition matrix rows: from +1, from -1.
        const double T[2][2] = {{s->q_pp, 1.0 - s->q_pp}, {1.0 - s->q_mm, s->q_mm}};
        double p = 1.0;
        int state = 0;
        for (auto x : pattern) {
            const int next = x > 0 ? 0 : 1;
            p *= T[state][next];
            state = next;
        }
        return p;
    }
    if (const auto* s = std::get_if<BlockSpec>(&spec)) {
        // Split (+1, pattern) into maximal runs; all but the last are complete blocks.
        std::vector<std::int8_t> full{1};
        full.insert(full.end(), pattern.begin(), pattern.end());
        std::vector<std::pair<int, std::size_t>> runs;
        for (auto x : full) {
            if (!runs.empty() && runs.back().first == x)
                ++runs.back().second;
            else
                runs.emplace_back(x, 1);
        }
        double p = 1.0;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            const double theta = runs[r].first > 0 ? s->theta : s->minus_exponent();
            const double len = static_cast<double>(runs[r].second);
            const double at_least = std::pow(len, -theta);
            p *= r + 1 < runs.size() ? at_least - std::pow(len + 1.0, -theta) : at_least;
        }
        return p;
    }
    const auto& g = std::get<GaussianSignsParams>(spec);
    if (!g.independent()) throw std::invalid_argument("pattern probability: correlated Gaussian signs not supported");
    return std::ldexp(1.0, -static_cast<int>(pattern.size()));
}

double brute_force_annealed_log_partition(double alpha, const GeneratorSpec& spec, const PinningParams& params,
                                          std::size_t N) {
    if (N == 0 || N > 12) throw std::invalid_argument("brute force annealed: need 1 <= N <= 12");
    std::vector<double> prob(std::size_t{1} << N);
    std::vector<std::int8_t> pattern(N);
    for (std::uint32_t env = 0; env < (1U << N); ++env) {
        for (std::size_t i = 0; i < N; ++i) pattern[i] = env >> i & 1U ? 1 : -1;
        prob[env] = pattern_probability(spec, pattern);
    }
    double z = 0.0;
    for (std::uint32_t mask = 0; mask < (1U << N); ++mask) {
        double weight = 1.0;
        std::size_t last = 0, contacts = 0;
        for (std::size_t i = 1; i <= N; ++i) {
            if (!(mask >> (i - 1) & 1U)) continue;
            weight *= K(alpha, i - last);
            last = i;
            ++contacts;
        }
        weight *= Kbar(alpha, N - last);
        // E exp(β Σ_{i∈mask} ω_i)
        double tilt = 0.0;
        for (std::uint32_t env = 0; env < (1U << N); ++env) {
            const int plus = std::popcount(env & mask);
            const int minus = static_cast<int>(contacts) - plus;
            tilt += prob[env] * std::exp(params.beta * (plus - minus));
        }
        z += weight * std::exp(params.h * static_cast<double>(contacts)) * tilt;
    }
    return std::log(z);
}

double arcsine_covariance(double rho) { return 2.0 / std::numbers::pi * std::asin(rho); }

double homogeneous_prefactor(double alpha) {
    const double zeta = boost::math::zeta(1.0 + alpha);
    if (alpha < 1.0) return std::pow(alpha * zeta / boost::math::tgamma(1.0 - alpha), 1.0 / alpha);
    if (alpha > 1.0) return boost::math::zeta(1.0 + alpha) / boost::math::zeta(alpha);
    throw std::invalid_argument("homogeneous prefactor: alpha = 1 has a logarithmic correction");
}

}  // namespace pinlab::oracle
