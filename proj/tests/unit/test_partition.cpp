#include <doctest.h>

#include <cmath>
#include <vector>

#include "pinlab/environment.hpp"
#include "pinlab/oracles.hpp"
#include "pinlab/partition.hpp"
#include "pinlab/rng.hpp"

using namespace pinlab;

namespace {

const RenewalLaw& law05() {
    static const RenewalLaw law = build_renewal_law(0.5, std::size_t{1} << 13);
    return law;
}

double uniform(Engine& eng, double lo, double hi) { return lo + (hi - lo) * uniform01(eng); }

GeneratorSpec pick(Engine& eng) {
    switch (eng() % 4) {
        case 0: return IidSpec{uniform(eng, 0.2, 0.8)};
        case 1: return MarkovSpec{uniform(eng, 0.2, 0.9), uniform(eng, 0.2, 0.9)};
        case 2: return BlockSpec{uniform(eng, 1.2, 2.5), std::nullopt};
        default: return GaussianSignsParams{uniform(eng, 0.3, 3.0)};
    }
}

}  // namespace

TEST_SUITE("partition") {

TEST_CASE("single site and untilted cases") {
    const RenewalLaw& law = law05();
    for (std::int8_t w : {std::int8_t{1}, std::int8_t{-1}}) {
        const std::vector<std::int8_t> site{w};
        const PartitionTrace t = pinned_partition(law, site, {0.8, -0.4});
        CHECK(t.logZpin[0] == 0.0);
        CHECK(t.logZpin[1] == doctest::Approx(-0.4 + 0.8 * w + std::log(law.K(1))).epsilon(1e-15));
    }
    const BinaryEnvironment env = generate_iid(0.5, 1000, 4);
    CHECK(std::abs(log_free_partition(law, env.site_span(1000), {0.0, 0.0})) <= 1e-12);
}

TEST_CASE("transfer equals brute-force enumeration") {
    Engine eng = make_engine(12);
    const RenewalLaw law2 = build_renewal_law(2.0, 64);
    for (int i = 0; i < 40; ++i) {
        const RenewalLaw& law = i % 2 ? law2 : law05();
        const std::size_t N = 1 + static_cast<std::size_t>(eng() % 14);
        const BinaryEnvironment env = generate(pick(eng), N, eng());
        const PinningParams p{uniform(eng, 0.0, 2.0), uniform(eng, -2.0, 1.0)};
        const auto sites = env.site_span(N);
        CHECK(log_free_partition(law, sites, p) ==
              doctest::Approx(oracle::brute_force_log_partition(law.alpha(), sites, p)).epsilon(1e-12));
        const PartitionTrace t = pinned_partition(law, sites, p);
        CHECK(t.logZpin[N] == doctest::Approx(oracle::brute_force_log_partition(law.alpha(), sites, p, false)).epsilon(1e-12));
    }
    const BinaryEnvironment env = generate_markov(0.6, 0.6, 12, 99);
    const PinningParams p{0.7, -0.3};
    CHECK(std::abs(log_free_partition(law05(), env.site_span(12), p) -
                   oracle::brute_force_log_partition(0.5, env.site_span(12), p)) <= 1e-10);
}

TEST_CASE("trace invariants") {
    Engine eng = make_engine(13);
    for (int i = 0; i < 30; ++i) {
        const std::size_t N = 50 + static_cast<std::size_t>(eng() % 2000);
        const BinaryEnvironment env = generate(pick(eng), N, eng());
        const PinningParams p{uniform(eng, 0.0, 3.0), uniform(eng, -4.0, 2.0)};
        const PartitionTrace t = pinned_partition(law05(), env.site_span(N), p);
        CHECK(t.logZpin[0] == 0.0);
        CHECK(t.logZfree >= t.logZpin[N]);
        CHECK(t.expected_contacts >= 0.0);
        CHECK(t.expected_contacts <= static_cast<double>(N));
        CHECK(t.logZfree == doctest::Approx(log_free_partition(law05(), env.site_span(N), p)).epsilon(1e-13));
        CHECK(t.logZfree / static_cast<double>(N) >= std::log(law05().Kbar(N)) / static_cast<double>(N));
    }
}

TEST_CASE("huge arguments stay finite") {
    const std::vector<std::int8_t> plus(8192, 1);
    CHECK(std::isfinite(log_free_partition(law05(), plus, {5.0, 20.0})));
    CHECK(std::isfinite(log_free_partition(law05(), plus, {5.0, -40.0})));
    CHECK(log_free_partition(law05(), plus, {0.0, 20.0}) == doctest::Approx(8192 * 20.0 + 8192 * std::log(law05().K(1))).epsilon(1e-9));
}

TEST_CASE("pathwise sandwich, monotonicity and convexity") {
    Engine eng = make_engine(14);
    for (int i = 0; i < 100; ++i) {
        const std::size_t N = 8 + static_cast<std::size_t>(eng() % 700);
        const BinaryEnvironment env = generate(pick(eng), N, eng());
        std::vector<std::int8_t> sites(env.site_span(N).begin(), env.site_span(N).end());
        const double beta = uniform(eng, 0.0, 2.0), h = uniform(eng, -3.0, 1.0), d = uniform(eng, 0.01, 0.4);
        const double z = log_free_partition(law05(), sites, {beta, h});
        CHECK(homogeneous_log_partition(law05(), h - beta, N) <= z);
        CHECK(z <= homogeneous_log_partition(law05(), h + beta, N));
        const double lo = log_free_partition(law05(), sites, {beta, h - d});
        const double hi = log_free_partition(law05(), sites, {beta, h + d});
        CHECK(lo <= z);
        CHECK(z <= hi);
        CHECK(2.0 * z <= lo + hi);
        const std::size_t flip = eng() % N;
        if (sites[flip] < 0) {
            sites[flip] = 1;
            CHECK(log_free_partition(law05(), sites, {beta, h}) >= z);
        }
    }
}

TEST_CASE("supermultiplicativity of pinned partition functions") {
    Engine eng = make_engine(15);
    for (int i = 0; i < 100; ++i) {
        const std::size_t N = 4 + static_cast<std::size_t>(eng() % 600);
        const std::size_t b = 1 + static_cast<std::size_t>(eng() % (N - 1));
        const BinaryEnvironment env = generate(pick(eng), N, eng());
        const auto sites = env.site_span(N);
        const PinningParams p{uniform(eng, 0.0, 2.0), uniform(eng, -3.0, 1.0)};
        const PartitionOptions o{false, true};
        const double whole = pinned_partition(law05(), sites, p, o).logZpin[N];
        const double left = pinned_partition(law05(), sites.first(b), p, o).logZpin[b];
        const double right = pinned_partition(law05(), sites.subspan(b), p, o).logZpin[N - b];
        CHECK(whole >= left + right);
    }
}

TEST_CASE("contact fraction") {
    const RenewalLaw law = build_renewal_law(0.5, 1024);
    const BinaryEnvironment env = generate_iid(0.5, 1024, 21);
    CHECK(contact_fraction(law, env, {0.0, 20.0}, 1024) >= 0.99);

    double u_sum = 0.0;
    for (std::size_t n = 1; n <= 1024; ++n) u_sum += law.u(n);
    CHECK(contact_fraction(law, env, {0.0, 0.0}, 1024) == doctest::Approx(u_sum / 1024.0).epsilon(1e-10));

    const BinaryEnvironment g = generate_gaussian_signs(GaussianSignsParams{0.5}, 1024, 5);
    for (double h : {-1.2, -0.5, 0.1}) {
        const PinningParams p{1.0, h};
        const double eps = 1e-6;
        const double fd = (log_free_partition(law, g.site_span(1024), {1.0, h + eps}) -
                           log_free_partition(law, g.site_span(1024), {1.0, h - eps})) /
                          (2.0 * eps * 1024.0);
        CHECK(std::abs(contact_fraction(law, g, p, 1024) - fd) <= 1e-5);
    }
}

TEST_CASE("free energy estimates") {
    const RenewalLaw& law = law05();
    const FreeEnergyEstimate pure = free_energy_estimate(law, MarkovSpec{0.7, 0.7}, {0.0, 0.2}, 2048, 8, 3);
    CHECK(pure.value == doctest::Approx(homogeneous_log_partition(law, 0.2, 2048) / 2048.0).epsilon(1e-14));
    CHECK(pure.std_err == 0.0);

    const PinningParams p{1.0, -0.6};
    const FreeEnergyEstimate e = free_energy_estimate(law, BlockSpec{1.5, std::nullopt}, p, 1024, 16, 4);
    REQUIRE(e.per_sample.size() == 16);
    for (double v : e.per_sample) {
        CHECK(v >= homogeneous_log_partition(law, p.h - p.beta, 1024) / 1024.0);
        CHECK(v <= homogeneous_log_partition(law, p.h + p.beta, 1024) / 1024.0);
    }
    // Same root seed and any worker count give the same numbers.
    const FreeEnergyEstimate again = free_energy_estimate(law, BlockSpec{1.5, std::nullopt}, p, 1024, 16, 4, 3);
    CHECK(again.per_sample == e.per_sample);
}

TEST_CASE("Gaussian signs a = 0.5 is localised at beta = 1, h = -0.5") {
    const FreeEnergyEstimate e =
        free_energy_estimate(law05(), GaussianSignsParams{0.5}, {1.0, -0.5}, std::size_t{1} << 13, 64, 2);
    CHECK(e.value - 4.0 * e.std_err > 0.0);
}

}
