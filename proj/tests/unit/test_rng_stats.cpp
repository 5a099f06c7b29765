#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "pinlab/rng.hpp"
#include "pinlab/stats.hpp"

using namespace pinlab;

TEST_SUITE("rng_stats") {

TEST_CASE("derived seeds are stable and distinct") {
    CHECK(derive_seed(1, stream_tag("disorder"), 3) == derive_seed(1, stream_tag("disorder"), 3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, stream_tag("a"), i));
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, stream_tag("b"), i));
    CHECK(seen.size() == 2000);
    CHECK(stream_tag("a") != stream_tag("b"));
}

TEST_CASE("uniform01 stays in the open unit interval") {
    Engine eng = make_engine(5);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = uniform01(eng);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
}

TEST_CASE("mean and standard error") {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    const MeanStderr m = mean_stderr(xs);
    CHECK(m.mean == doctest::Approx(2.5));
    CHECK(m.std_err == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
    const std::vector<double> same(10, 0.3);
    CHECK(mean_stderr(same).std_err == 0.0);
}

TEST_CASE("log-sum-exp is stable for large arguments") {
    const std::vector<double> xs{1000.0, 1000.0};
    CHECK(log_sum_exp(xs) == doctest::Approx(1000.0 + std::log(2.0)));
    CHECK(log_sum_exp(std::vector<double>{}) == -std::numeric_limits<double>::infinity());
    const LogMean lm = log_mean_exp(std::vector<double>{-5.0, -5.0, -5.0});
    CHECK(lm.log_mean == doctest::Approx(-5.0));
    CHECK(lm.max_share == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("Wilson interval brackets the proportion") {
    const Interval iv = wilson_interval(30, 100);
    CHECK(iv.lo < 0.3);
    CHECK(iv.hi > 0.3);
    CHECK(iv.lo == doctest::Approx(0.2189).epsilon(1e-3));
    CHECK(iv.hi == doctest::Approx(0.3958).epsilon(1e-3));
    CHECK(wilson_interval(0, 50).lo == 0.0);
}

TEST_CASE("linear fit recovers an exact line") {
    const std::vector<double> x{0, 1, 2, 3, 4};
    std::vector<double> y;
    for (double v : x) y.push_back(2.0 - 0.5 * v);
    const LinearFit f = linear_fit(x, y);
    CHECK(f.slope == doctest::Approx(-0.5));
    CHECK(f.intercept == doctest::Approx(2.0));
    CHECK(f.r2 == doctest::Approx(1.0));
}

TEST_CASE("Student t quantiles") {
    CHECK(student_t_quantile(10) == doctest::Approx(2.228139).epsilon(1e-6));
    CHECK(student_t_quantile(1e6) == doctest::Approx(1.959966).epsilon(1e-5));
}

TEST_CASE("parallel_for fills every slot once for any worker count") {
    for (unsigned w : {1u, 3u}) {
        std::vector<int> out(257, 0);
        parallel_for(out.size(), w, [&](std::size_t i) { out[i] += static_cast<int>(i); });
        for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i));
    }
}

}
