#include <doctest.h>

#include <cmath>
#include <vector>

#include "pinlab/homogeneous.hpp"
#include "pinlab/oracles.hpp"
#include "pinlab/partition.hpp"
#include "support.hpp"

using namespace pinlab;

TEST_SUITE("homogeneous") {

TEST_CASE("free energy vanishes for h <= 0 and grows with h") {
    const RenewalLaw law = build_renewal_law(0.5, 4096);
    CHECK(homogeneous_free_energy(law, 0.0) == 0.0);
    CHECK(homogeneous_free_energy(law, -1.0) == 0.0);
    double prev = 0.0;
    for (double h : {1e-3, 1e-2, 0.1, 1.0, 3.0}) {
        const double f = homogeneous_free_energy(law, h);
        CHECK(f > prev);
        CHECK(f <= h);
        prev = f;
    }
}

TEST_CASE("root solves the renewal equation for the full power law") {
    // Independent route: sum_n K(n) e^{-F n} = e^{-h} with the zeta-normalised law summed far out.
    for (double alpha : {0.5, 2.0}) {
        const RenewalLaw law = build_renewal_law(alpha, 64);
        const double zeta = testing_support::em_zeta(1.0 + alpha);
        for (double h : {0.05, 0.5}) {
            const double F = homogeneous_free_energy(law, h);
            double s = 0.0;
            for (std::size_t n = 1; n <= 4'000'000; ++n)
                s += std::pow(static_cast<double>(n), -1.0 - alpha) * std::exp(-F * static_cast<double>(n));
            CHECK(s / zeta == doctest::Approx(std::exp(-h)).epsilon(1e-9));
        }
    }
}

TEST_CASE("small-h asymptotics") {
    const RenewalLaw half = build_renewal_law(0.5, 1 << 16);
    const double pref = homogeneous_free_energy(half, 1e-3) / 1e-6;
    // (0.5 zeta(3/2) / sqrt(pi))^2, frozen.
    CHECK(oracle::homogeneous_prefactor(0.5) == doctest::Approx(0.5430768494621265).epsilon(1e-12));
    CHECK(std::abs(pref / 0.5430768494621265 - 1.0) <= 0.05);

    const RenewalLaw two = build_renewal_law(2.0, 1 << 16);
    // 1 / sum n K(n) = zeta(3) / zeta(2), frozen.
    const double slope = homogeneous_free_energy(two, 1e-4) / 1e-4;
    CHECK(oracle::homogeneous_prefactor(2.0) == doctest::Approx(1.0 / 1.3684327776202059).epsilon(1e-12));
    CHECK(std::abs(slope * 1.3684327776202059 - 1.0) <= 0.02);
}

TEST_CASE("finite-size free energy converges at rate log N / N") {
    const std::size_t N = std::size_t{1} << 14;
    const RenewalLaw law = build_renewal_law(0.5, N);
    for (double h : {0.1, 0.3}) {
        const double fn = homogeneous_log_partition(law, h, N) / static_cast<double>(N);
        CHECK(std::abs(fn - homogeneous_free_energy(law, h)) <= 5.0 * std::log(static_cast<double>(N)) / static_cast<double>(N));
    }
}

TEST_CASE("excess partition below the correlation length") {
    const RenewalLaw law = build_renewal_law(0.5, std::size_t{1} << 18);
    const double h = 1e-3, F = homogeneous_free_energy(law, h);
    const auto n_top = static_cast<std::size_t>(0.1 / F);
    const auto excess = homogeneous_excess_partition(law, h, n_top);
    CHECK(excess[0] == 0.0);
    double c = 0.0;
    for (std::size_t n = 1; n <= n_top; ++n) {
        REQUIRE(excess[n] >= 0.0);
        c = std::max(c, excess[n] / std::sqrt(static_cast<double>(n) * F));
    }
    CHECK(c <= 10.0);
    // Agrees with the log-domain homogeneous transfer where both are cheap.
    for (std::size_t n : {1, 10, 1000})
        CHECK(std::log1p(excess[n]) == doctest::Approx(homogeneous_log_partition(law, h, n)).epsilon(1e-10));
}

}
