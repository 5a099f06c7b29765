#include <doctest.h>

#include <cmath>
#include <vector>

#include "pinlab/annealed.hpp"
#include "pinlab/oracles.hpp"
#include "pinlab/partition.hpp"
#include "pinlab/rng.hpp"

using namespace pinlab;

namespace {

const RenewalLaw& law05() {
    static const RenewalLaw law = build_renewal_law(0.5, 4096);
    return law;
}

}  // namespace

TEST_SUITE("annealed") {

TEST_CASE("IID tilt") {
    CHECK(iid_tilt(0.5, 0.7) == doctest::Approx(std::cosh(0.7)));
    CHECK(iid_tilt(0.2, 1.0) == doctest::Approx(0.2 * std::exp(1.0) + 0.8 * std::exp(-1.0)));
}

TEST_CASE("IID exact mode against enumeration and the brute-force oracle") {
    Engine eng = make_engine(8);
    for (int i = 0; i < 10; ++i) {
        const PinningParams p{2.0 * uniform01(eng), -2.0 + 3.0 * uniform01(eng)};
        const std::size_t N = 2 + i;
        const double exact = annealed_estimate(law05(), IidSpec{0.5}, p, N, 0, 0, AnnealedMode::exact).value;
        CHECK(exact * static_cast<double>(N) ==
              doctest::Approx(homogeneous_log_partition(law05(), p.h + std::log(std::cosh(p.beta)), N)).epsilon(1e-13));
        CHECK(exact * static_cast<double>(N) ==
              doctest::Approx(oracle::brute_force_annealed_log_partition(0.5, IidSpec{0.5}, p, N)).epsilon(1e-12));
    }
}

TEST_CASE("state transfer matches brute force for Markov and block laws") {
    const std::vector<GeneratorSpec> specs{MarkovSpec{0.7, 0.4}, MarkovSpec{0.2, 0.9}, BlockSpec{1.5, std::nullopt},
                                           BlockSpec{2.5, 1.2}};
    for (const auto& spec : specs) {
        for (std::size_t N : {1, 5, 10}) {
            const PinningParams p{0.9, -0.4};
            const double oracle_value = oracle::brute_force_annealed_log_partition(0.5, spec, p, N);
            CHECK(annealed_log_partition_state(law05(), spec, p, N) == doctest::Approx(oracle_value).epsilon(1e-12));
            CHECK(annealed_log_partition_enumerated(law05(), spec, p, N) == doctest::Approx(oracle_value).epsilon(1e-12));
        }
    }
    CHECK_THROWS(annealed_log_partition_state(law05(), BlockSpec{1.5, std::nullopt}, {1.0, 0.0}, 65));
    CHECK_THROWS(annealed_log_partition_enumerated(law05(), GaussianSignsParams{0.5}, {1.0, 0.0}, 8));
}

TEST_CASE("block law at N = 14: all-attractive lower bound") {
    const BlockSpec spec{1.5, std::nullopt};
    for (double h : {-1.5, -0.8, 0.0}) {
        const PinningParams p{1.0, h};
        const double ann = annealed_log_partition_enumerated(law05(), spec, p, 14);
        CHECK(ann == doctest::Approx(annealed_log_partition_state(law05(), spec, p, 14)).epsilon(1e-12));
        CHECK(ann >= std::log(*exact_xi_tail(spec, 15)) + homogeneous_log_partition(law05(), h + 1.0, 14));
    }
}

TEST_CASE("Jensen: annealed dominates quenched") {
    const std::vector<GeneratorSpec> specs{IidSpec{0.5}, MarkovSpec{0.7, 0.7}, BlockSpec{1.5, std::nullopt},
                                           GaussianSignsParams{0.5}};
    for (const auto& spec : specs) {
        const PinningParams p{1.0, -0.7};
        const FreeEnergyEstimate q = free_energy_estimate(law05(), spec, p, 512, 32, 77);
        const FreeEnergyEstimate mc = annealed_estimate(law05(), spec, p, 512, 32, 77, AnnealedMode::monte_carlo);
        CHECK(mc.value >= q.value);
        // Exact routes carry no sampling error, so the quenched mean may sit above them by noise only.
        const FreeEnergyEstimate automatic = annealed_estimate(law05(), spec, p, 512, 32, 77);
        CHECK(automatic.value >= q.value - 4.0 * q.std_err);
        const FreeEnergyEstimate mu = inverse_partition_estimate(law05(), spec, p, 512, 32, 77);
        CHECK(mu.value <= q.value + 4.0 * q.std_err);
    }
}

TEST_CASE("automatic mode picks exact routes where available") {
    const PinningParams p{0.5, -0.2};
    CHECK(annealed_estimate(law05(), IidSpec{0.4}, p, 256, 4, 1).mode == "exact-iid");
    CHECK(annealed_estimate(law05(), MarkovSpec{0.7, 0.7}, p, 256, 4, 1).mode == "exact-state");
    CHECK(annealed_estimate(law05(), GaussianSignsParams{0.5}, p, 256, 4, 1).mode == "mc");
    const auto markov = annealed_estimate(law05(), MarkovSpec{0.7, 0.7}, p, 256, 4, 1);
    CHECK(markov.std_err == 0.0);
}

TEST_CASE("inverse partition estimate") {
    const PinningParams p0{0.0, 0.3};
    const FreeEnergyEstimate mu0 = inverse_partition_estimate(law05(), MarkovSpec{0.7, 0.7}, p0, 1024, 8, 4);
    CHECK(mu0.value == doctest::Approx(homogeneous_log_partition(law05(), 0.3, 1024) / 1024.0).epsilon(1e-13));

    // Symmetric block law: the all-repulsive stretches dominate E[1/Z]. They have probability of order
    // N^{-theta}, so a few hundred samples miss them and the estimator must flag the heavy tail.
    const BlockSpec block{1.5, std::nullopt};
    const FreeEnergyEstimate few = inverse_partition_estimate(law05(), block, {1.0, 1.5}, 1024, 256, 5);
    CHECK(few.heavy_tail);
    const FreeEnergyEstimate mu = inverse_partition_estimate(law05(), block, {1.0, 1.5}, 1024, 4096, 5);
    const double target = homogeneous_log_partition(law05(), 0.5, 1024) / 1024.0;
    CHECK(std::abs(mu.value / target - 1.0) <= 0.15);
    CHECK(mu.value < few.value);
}

}
