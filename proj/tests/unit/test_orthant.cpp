#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pinlab/environment.hpp"
#include "pinlab/orthant.hpp"
#include "pinlab/rng.hpp"

using namespace pinlab;

namespace {

/// P(X > 0, Y > 0) = ∫_0^∞ φ(x) Φ(ρx/√(1-ρ²)) dx by Simpson's rule.
double orthant2_quadrature(double rho) {
    const double s = rho / std::sqrt(1.0 - rho * rho);
    const int m = 20000;
    const double top = 12.0, dx = top / m;
    auto f = [&](double x) {
        return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi) * 0.5 * std::erfc(-s * x / std::sqrt(2.0));
    };
    double sum = f(0.0) + f(top);
    for (int i = 1; i < m; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * dx);
    return sum * dx / 3.0;
}

/// Rounding slack covers the deterministic weights of the independent case, where std_err is 0.
bool within(const OrthantEstimate& e, double exact_log, double z) {
    return std::abs(e.log_p - exact_log) <= z * e.std_err + 1e-12 * std::abs(exact_log);
}

}  // namespace

TEST_SUITE("orthant") {

TEST_CASE("bivariate closed form against quadrature") {
    for (double rho : {-0.6, 0.0, 0.3, 0.5, 0.9}) CHECK(bivariate_orthant(rho) == doctest::Approx(orthant2_quadrature(rho)).epsilon(1e-9));
    CHECK(bivariate_orthant(0.5) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("low-dimensional cases") {
    const OrthantEstimate one = orthant_probability(GaussianSignsParams{0.5}, 1, 10000, 1);
    CHECK(within(one, std::log(0.5), 4.0));
    Eigen::MatrixXd cov(2, 2);
    cov << 1.0, 0.0, 0.0, 1.0;
    CHECK(within(orthant_probability_cov(cov, 100000, 2), std::log(0.25), 4.0));
    cov << 1.0, 0.5, 0.5, 1.0;
    CHECK(within(orthant_probability_cov(cov, 100000, 3), std::log(1.0 / 3.0), 4.0));
    const std::vector<std::size_t> single{1};
    CHECK(within(subsequence_orthant(GaussianSignsParams{0.5}, single, 1000, 4), std::log(0.5), 4.0));
    OrthantOptions sc;
    sc.method = OrthantMethod::sequential_conditioning;
    CHECK(orthant_probability(GaussianSignsParams{0.5}, 1, 100, 1, sc).log_p == doctest::Approx(std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("independent limit is the product law") {
    const GaussianSignsParams ind{std::numeric_limits<double>::infinity()};
    for (std::size_t n : {4, 16, 48}) {
        const OrthantEstimate e = orthant_probability(ind, n, 20000, 5 + n);
        CHECK(within(e, -static_cast<double>(n) * std::log(2.0), 4.0));
    }
}

TEST_CASE("estimate bookkeeping") {
    for (std::size_t n : {3, 10, 40}) {
        const OrthantEstimate e = orthant_probability(GaussianSignsParams{0.5}, n, 5000, 9);
        CHECK(e.log_p <= 0.0);
        CHECK(e.ess <= static_cast<double>(e.samples));
        CHECK(e.std_err >= 0.0);
    }
}

TEST_CASE("sequential conditioning agrees with plain Monte Carlo") {
    OrthantOptions sc, mc;
    sc.method = OrthantMethod::sequential_conditioning;
    mc.method = OrthantMethod::plain_mc;
    for (double a : {0.5, 2.0}) {
        for (std::size_t n : {4, 8, 12}) {
            const OrthantEstimate x = orthant_probability(GaussianSignsParams{a}, n, 50000, 10 + n, sc);
            const OrthantEstimate y = orthant_probability(GaussianSignsParams{a}, n, 400000, 20 + n, mc);
            CHECK(std::abs(x.log_p - y.log_p) <= 4.0 * std::hypot(x.std_err, y.std_err));
        }
    }
}

TEST_CASE("nested index sets give non-increasing probabilities") {
    const GaussianSignsParams params{0.5};
    double prev = 0.0, prev_se = 0.0;
    for (std::size_t n : {2, 4, 8, 16, 32}) {
        const OrthantEstimate e = orthant_probability(params, n, 20000, 30 + n);
        CHECK(e.log_p <= prev + 3.0 * std::hypot(e.std_err, prev_se));
        prev = e.log_p;
        prev_se = e.std_err;
    }
}

TEST_CASE("exponent fits") {
    const std::vector<std::size_t> ns{4, 8, 16, 32, 64};
    const ExponentFit slow = exponent_fit(GaussianSignsParams{0.5}, ns, 100000, 40);
    CHECK(slow.mode == "stretched");
    CHECK(slow.fit.slope >= 0.35);
    CHECK(slow.fit.slope <= 0.75);
    const ExponentFit fast = exponent_fit(GaussianSignsParams{2.0}, ns, 100000, 41);
    CHECK(fast.mode == "linear");
    CHECK(fast.fit.r2 >= 0.98);
}

TEST_CASE("spread subsequences decay at the explicit 3^{-m/4} rate") {
    const double a = 0.5;
    const std::size_t n = 400, A = 4;
    const auto gap = static_cast<std::size_t>(static_cast<double>(A) * std::pow(static_cast<double>(n), 1.0 - a));
    std::vector<std::size_t> S;
    for (std::size_t j = 1; j * gap <= n; ++j) S.push_back(j * gap);
    const OrthantEstimate e = subsequence_orthant(GaussianSignsParams{a}, S, 20000, 50);
    const double c = -e.log_p / static_cast<double>(S.size());
    CHECK(c >= std::log(3.0) / 4.0 - 0.02);

    std::vector<std::size_t> consecutive;
    for (std::size_t i = 1; i <= S.size(); ++i) consecutive.push_back(i);
    const OrthantEstimate block = subsequence_orthant(GaussianSignsParams{a}, consecutive, 20000, 51);
    CHECK(std::exp(block.log_p) >= std::exp(e.log_p) - 4.0 * std::hypot(std::exp(block.log_p) * block.std_err,
                                                                           std::exp(e.log_p) * e.std_err));
}

TEST_CASE("orthant route and environment sampling agree on the run tail") {
    const GaussianSignsParams params{0.5};
    for (std::size_t n : {4, 8}) {
        const OrthantEstimate palm = palm_run_tail(params, n, 50000, 60 + n);
        const std::size_t draws = 40000;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < draws; ++i)
            if (sample_first_run(params, n, derive_seed(70 + n, 0, i)) >= static_cast<double>(n)) ++hits;
        const double p = static_cast<double>(hits) / static_cast<double>(draws);
        const double se_env = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
        const double p_orth = std::exp(palm.log_p);
        CHECK(std::abs(p - p_orth) <= 4.0 * std::hypot(se_env, p_orth * palm.std_err));
    }
}

}
