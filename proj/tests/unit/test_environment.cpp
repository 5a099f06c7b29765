#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pinlab/environment.hpp"
#include "pinlab/oracles.hpp"
#include "pinlab/rng.hpp"
#include "support.hpp"

using namespace pinlab;
using testing_support::mean;
using testing_support::sem;

namespace {

double site_mean(const BinaryEnvironment& env) {
    double s = 0.0;
    for (std::size_t i = 1; i < env.omega.size(); ++i) s += env.omega[i];
    return s / static_cast<double>(env.sites());
}

/// Empirical P(ξ₁ ≥ n) from independent first-run draws.
double run_tail(const GeneratorSpec& spec, std::size_t n, std::size_t draws, std::uint64_t seed) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < draws; ++i)
        if (sample_first_run(spec, n, derive_seed(seed, 1, i)) >= static_cast<double>(n)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(draws);
}

double binomial_se(double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

}  // namespace

TEST_SUITE("environment") {

TEST_CASE("origin convention, alphabet and determinism for every generator") {
    const std::vector<GeneratorSpec> specs{IidSpec{0.3}, MarkovSpec{0.8, 0.4}, BlockSpec{1.5, std::nullopt},
                                           BlockSpec{2.0, 1.2}, GaussianSignsParams{0.5}, GaussianSignsParams{2.0}};
    for (const auto& spec : specs) {
        const BinaryEnvironment a = generate(spec, 5000, 123);
        const BinaryEnvironment b = generate(spec, 5000, 123);
        CHECK(a.omega == b.omega);
        CHECK(a.sites() == 5000);
        CHECK(a.omega[0] == 1);
        CHECK(std::all_of(a.omega.begin(), a.omega.end(), [](std::int8_t w) { return w == 1 || w == -1; }));
        CHECK(generate(spec, 5000, 124).omega != a.omega);
        CHECK(a.generator_id == generator_id(spec));
    }
}

TEST_CASE("generator specs serialise strictly") {
    const std::vector<GeneratorSpec> specs{IidSpec{0.3}, MarkovSpec{0.8, 0.4}, BlockSpec{2.0, 1.2},
                                           GaussianSignsParams{0.5}};
    for (const auto& spec : specs) CHECK(generator_to_json(generator_from_json(generator_to_json(spec))) == generator_to_json(spec));
    CHECK_THROWS(generator_from_json(nlohmann::json{{"type", "markov"}, {"q_pp", 0.5}, {"qmm", 0.5}}));
    CHECK_THROWS(generator_from_json(nlohmann::json{{"type", "levy"}}));
    CHECK_THROWS(validate(GeneratorSpec{IidSpec{1.5}}));
    CHECK_THROWS(validate(GeneratorSpec{BlockSpec{0.9, std::nullopt}}));
    CHECK_THROWS(generate_iid(0.5, 10, 1).site_span(11));
}

TEST_CASE("IID: symmetric mean and geometric attractive runs") {
    const std::size_t N = 1'000'000;
    const BinaryEnvironment env = generate_iid(0.5, N, 77);
    CHECK(std::abs(site_mean(env)) <= 4.0 / std::sqrt(static_cast<double>(N)));
    for (std::size_t n : {1, 2, 4, 8}) {
        const double exact = 2.0 * std::pow(2.0, -static_cast<double>(n));
        CHECK(*exact_xi_tail(IidSpec{0.5}, n) == doctest::Approx(exact));
        const double p = run_tail(IidSpec{0.5}, n, 200'000, 5 + n);
        CHECK(std::abs(p - exact) <= 4.0 * binomial_se(exact, 200'000));
    }
}

TEST_CASE("Markov: fair chain is IID and runs are geometric") {
    const BinaryEnvironment env = generate_markov(0.5, 0.5, 1 << 20, 8);
    std::vector<double> prod;
    for (std::size_t i = 1; i + 1 < env.omega.size(); ++i) prod.push_back(env.omega[i] * env.omega[i + 1]);
    CHECK(std::abs(mean(prod)) <= 4.0 * sem(prod));

    for (std::size_t n = 1; n <= 20; ++n) {
        REQUIRE(*exact_xi_tail(MarkovSpec{0.8, 0.6}, n) == doctest::Approx(std::pow(0.8, static_cast<double>(n) - 1.0)));
    }
    for (std::size_t n : {5, 10, 20}) {
        const double exact = std::pow(0.8, static_cast<double>(n) - 1.0);
        const double p = run_tail(MarkovSpec{0.8, 0.6}, n, 100'000, 40 + n);
        CHECK(std::abs(p / exact - 1.0) <= 4.0 * binomial_se(exact, 100'000) / exact);
    }
}

TEST_CASE("Markov: all-plus events on sparse index sets decay exponentially") {
    // Exact chain computation started from omega_0 = +1.
    auto all_plus = [](double qpp, double qmm, const std::vector<std::size_t>& S) {
        const double lambda = qpp + qmm - 1.0, pi = (1.0 - qmm) / (2.0 - qpp - qmm);
        double p = 1.0;
        std::size_t last = 0;
        for (std::size_t s : S) {
            p *= pi + (1.0 - pi) * std::pow(lambda, static_cast<double>(s - last));
            last = s;
        }
        return p;
    };
    Engine eng = make_engine(31);
    // The bound needs q_pp + q_mm >= 1: with negative correlation two-step returns can exceed max(q_pp, pi).
    const std::vector<std::pair<double, double>> params{{0.7, 0.7}, {0.9, 0.3}, {0.5, 0.5}, {0.6, 0.8}};
    for (auto [qpp, qmm] : params) {
        const double pi = (1.0 - qmm) / (2.0 - qpp - qmm);
        const double c0 = -std::log(std::max(qpp, pi));
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<std::size_t> S;
            for (std::size_t i = 1; i <= 30; ++i)
                if (uniform01(eng) < 0.35 && S.size() < 12) S.push_back(i);
            if (S.empty()) continue;
            const double p = all_plus(qpp, qmm, S);
            REQUIRE(p <= std::exp(-c0 * static_cast<double>(S.size())) * (1.0 + 1e-12));
            std::vector<std::int8_t> pattern(S.back(), 0);
            // Cross-check one set against the independent pattern oracle by summing over free sites.
            const std::size_t free_sites = S.back() - S.size();
            if (trial < 20 && free_sites <= 16) {
                double total = 0.0;
                for (std::size_t mask = 0; mask < (std::size_t{1} << free_sites); ++mask) {
                    std::size_t bit = 0, k = 0;
                    for (std::size_t i = 1; i <= S.back(); ++i) {
                        if (k < S.size() && S[k] == i) {
                            pattern[i - 1] = 1;
                            ++k;
                        } else {
                            pattern[i - 1] = (mask >> bit++) & 1 ? 1 : -1;
                        }
                    }
                    total += oracle::pattern_probability(MarkovSpec{qpp, qmm}, pattern);
                }
                CHECK(total == doctest::Approx(p).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("block environment: power-law attractive blocks") {
    const BlockSpec spec{1.5, std::nullopt};
    for (std::size_t n : {8, 16, 32, 64, 128}) {
        const double exact = *exact_xi_tail(spec, n);
        CHECK(exact * std::pow(static_cast<double>(n), 1.5) == doctest::Approx(1.0));
        const double p = run_tail(spec, n, 100'000, 90 + n);
        const double scaled = p * std::pow(static_cast<double>(n), 1.5);
        CHECK(scaled >= 0.5);
        CHECK(scaled <= 2.0);
        CHECK(std::abs(p - exact) <= 4.0 * binomial_se(exact, 100'000));
    }
}

TEST_CASE("Gaussian signs: covariance family and marginals") {
    const GaussianSignsParams params{0.5};
    CHECK(params.rho(0) == 1.0);
    for (std::size_t k = 1; k < 1000; ++k) REQUIRE(params.rho(k) <= params.rho(k - 1));
    CHECK(params.rho(100000) * std::pow(100000.0, 0.5) == doctest::Approx(1.0).epsilon(1e-4));
    for (double a : {0.5, 2.0}) {
        const std::size_t N = 1 << 18;
        const BinaryEnvironment env = generate_gaussian_signs(GaussianSignsParams{a}, N, 1234);
        double plus = 0.0;
        for (std::size_t i = 1; i <= N; ++i) plus += env.omega[i] == 1;
        const double freq = plus / static_cast<double>(N);
        if (a > 1.0) {
            CHECK(std::abs(freq - 0.5) <= 4.0 / std::sqrt(static_cast<double>(N)));
        } else {
            // Long memory: the frequency variance decays like N^{-a}, not N^{-1}.
            CHECK(std::abs(freq - 0.5) <= 4.0 * std::sqrt(4.0 / std::numbers::pi / (1.0 - a) / (2.0 - a)) *
                                               std::pow(static_cast<double>(N), -a / 2.0));
        }
    }
}

TEST_CASE("Gaussian signs: short-lag covariance matches the arcsine law") {
    const GaussianSignsParams params{2.0};
    const BinaryEnvironment env = generate_gaussian_signs(params, 1 << 20, 55);
    for (std::size_t k : {1, 2, 5}) {
        std::vector<double> prod;
        for (std::size_t i = 1; i + k < env.omega.size(); i += k + 20) prod.push_back(env.omega[i] * env.omega[i + k]);
        CHECK(std::abs(mean(prod) - oracle::arcsine_covariance(params.rho(k))) <= 4.0 * sem(prod));
    }
}

TEST_CASE("Gaussian signs: independent limit is the fair IID law") {
    const GaussianSignsParams ind{std::numeric_limits<double>::infinity()};
    CHECK(ind.independent());
    CHECK(ind.rho(3) == 0.0);
    const BinaryEnvironment env = generate_gaussian_signs(ind, 1 << 18, 3);
    std::vector<double> prod;
    for (std::size_t i = 1; i + 1 < env.omega.size(); i += 2) prod.push_back(env.omega[i] * env.omega[i + 1]);
    CHECK(std::abs(mean(prod)) <= 4.0 * sem(prod));
    const double p = run_tail(ind, 4, 100'000, 6);
    CHECK(std::abs(p - 0.125) <= 4.0 * binomial_se(0.125, 100'000));
}

TEST_CASE("prefix probabilities sum to one") {
    const std::vector<GeneratorSpec> specs{IidSpec{0.3}, MarkovSpec{0.8, 0.4}, BlockSpec{1.5, std::nullopt}};
    for (const auto& spec : specs) {
        double total = 0.0;
        std::vector<std::int8_t> pattern(10);
        for (std::size_t mask = 0; mask < 1024; ++mask) {
            for (std::size_t i = 0; i < 10; ++i) pattern[i] = (mask >> i) & 1 ? 1 : -1;
            const double p = *prefix_probability(spec, pattern);
            REQUIRE(p == doctest::Approx(oracle::pattern_probability(spec, pattern)).epsilon(1e-12));
            total += p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_FALSE(prefix_probability(GaussianSignsParams{0.5}, std::vector<std::int8_t>{1, 1}).has_value());
}

}
