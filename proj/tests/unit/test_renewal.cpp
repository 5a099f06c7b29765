#include <doctest.h>

#include <cmath>
#include <vector>

#include "pinlab/renewal.hpp"
#include "pinlab/rng.hpp"
#include "pinlab/stats.hpp"
#include "support.hpp"

using namespace pinlab;

TEST_SUITE("renewal") {

TEST_CASE("normalisation and tail bookkeeping") {
    const RenewalLaw law = build_renewal_law(0.5, std::size_t{1} << 16);
    double total = law.Kbar(law.n_max());
    for (std::size_t n = 1; n <= law.n_max(); ++n) total += law.K(n);
    CHECK(std::abs(total - 1.0) <= 1e-12);
    CHECK(law.Kbar(0) == 1.0);
    for (std::size_t n = 1; n <= law.n_max(); ++n) {
        REQUIRE(law.K(n) > 0.0);
        REQUIRE(std::abs(law.Kbar(n - 1) - law.Kbar(n) - law.K(n)) <= 1e-15 * law.Kbar(n - 1));
    }
}

TEST_CASE("pure power law with the zeta normalisation") {
    for (double alpha : {0.3, 0.5, 1.5, 2.0}) {
        const RenewalLaw law = build_renewal_law(alpha, 4096);
        CHECK(law.c_K() == doctest::Approx(1.0 / testing_support::em_zeta(1.0 + alpha)).epsilon(1e-12));
        CHECK(law.K(1) / law.K(2) == doctest::Approx(std::pow(2.0, 1.0 + alpha)).epsilon(1e-14));
        for (std::size_t n = 64; n <= 4096; n *= 2) {
            const double r = law.K(n) * std::pow(static_cast<double>(n), 1.0 + alpha) / law.c_K();
            CHECK(std::abs(r - 1.0) <= 1e-6);
        }
    }
    // 1/ζ(3/2), frozen.
    CHECK(build_renewal_law(0.5, 16).c_K() == doctest::Approx(0.38279338399942656).epsilon(1e-13));
}

TEST_CASE("K and Kbar strictly decreasing") {
    const RenewalLaw law = build_renewal_law(2.0, 8192);
    for (std::size_t n = 2; n <= law.n_max(); ++n) {
        REQUIRE(law.K(n) < law.K(n - 1));
        REQUIRE(law.Kbar(n) < law.Kbar(n - 1));
    }
}

TEST_CASE("alpha = 1 and bad sizes are rejected") {
    CHECK_THROWS(build_renewal_law(1.0, 100));
    CHECK_THROWS(build_renewal_law(-0.5, 100));
    CHECK_THROWS(build_renewal_law(0.5, 0));
}

TEST_CASE("renewal mass function") {
    const RenewalLaw law = build_renewal_law(0.5, std::size_t{1} << 14);
    CHECK(renewal_mass(law, 0) == 1.0);
    CHECK(renewal_mass(law, 2) == doctest::Approx(law.K(2) + law.K(1) * law.K(1)).epsilon(1e-15));
    for (std::size_t n = 1; n <= 64; ++n) {
        double s = 0.0;
        for (std::size_t m = 1; m <= n; ++m) s += law.K(m) * renewal_mass(law, n - m);
        REQUIRE(renewal_mass(law, n) == doctest::Approx(s).epsilon(1e-13));
    }
    std::vector<double> x, y;
    for (std::size_t n = 1024; n <= (std::size_t{1} << 14); n *= 2) {
        x.push_back(std::log(static_cast<double>(n)));
        y.push_back(std::log(renewal_mass(law, n)));
    }
    CHECK(std::abs(linear_fit(x, y).slope + 0.5) <= 0.05);
    CHECK_THROWS(renewal_mass(law, law.n_max() + 1));
}

TEST_CASE("finite mean converges for alpha > 1") {
    // Change of the partial sums of n K(n) over the last decade below n_max.
    auto last_decade = [](const RenewalLaw& law) {
        double partial_tenth = 0.0, partial = 0.0;
        for (std::size_t n = 1; n <= law.n_max(); ++n) {
            partial += static_cast<double>(n) * law.K(n);
            if (n == law.n_max() / 10) partial_tenth = partial;
        }
        CHECK(partial == doctest::Approx(law.truncated_mean()));
        return partial - partial_tenth;
    };
    CHECK(last_decade(build_renewal_law(3.0, std::size_t{1} << 16)) < 1e-6);
    // For alpha = 2 the decade tail is c_K * sum n^{-2} ~ 9 c_K / n_max, far above 1e-6 at this n_max.
    const RenewalLaw law = build_renewal_law(2.0, std::size_t{1} << 16);
    const double n_max = static_cast<double>(law.n_max());
    CHECK(last_decade(law) == doctest::Approx(law.c_K() * (10.0 / n_max - 1.0 / n_max)).epsilon(1e-3));
}

TEST_CASE("sampled renewal sets") {
    const RenewalLaw law = build_renewal_law(0.5, 4096);
    CHECK(sample_renewal(law, 1000, 9) == sample_renewal(law, 1000, 9));
    CHECK(sample_renewal(law, 0, 9) == std::vector<std::size_t>{0});
    const auto tau = sample_renewal(law, 4000, 11);
    CHECK(tau.front() == 0);
    CHECK(std::is_sorted(tau.begin(), tau.end()));
    CHECK(tau.back() <= 4000);
}

TEST_CASE("mean of the capped first gap matches the K table") {
    const RenewalLaw law = build_renewal_law(0.5, 256);
    Engine eng = make_engine(2024);
    std::vector<double> draws(1'000'000);
    for (auto& d : draws) d = static_cast<double>(std::min(sample_gap(law, eng), law.n_max()));
    double expect = static_cast<double>(law.n_max()) * law.Kbar(law.n_max());
    for (std::size_t n = 1; n <= law.n_max(); ++n) expect += static_cast<double>(n) * law.K(n);
    CHECK(std::abs(testing_support::mean(draws) - expect) <= 4.0 * testing_support::sem(draws));
}

}
