#include "pinlab/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

namespace pinlab {

MeanStderr mean_stderr(std::span<const double> xs) {
    MeanStderr r;
    double m2 = 0.0;
    for (double x : xs) {
        ++r.count;
        const double d = x - r.mean;
        r.mean += d / static_cast<double>(r.count);
        m2 += d * (x - r.mean);
    }
    if (r.count > 1) {
        const double var = m2 / static_cast<double>(r.count - 1);
        r.std_err = std::sqrt(std::max(var, 0.0) / static_cast<double>(r.count));
    }
    return r;
}

double log_sum_exp(std::span<const double> xs) {
    if (xs.empty()) return -std::numeric_limits<double>::infinity();
    const double m = *std::max_element(xs.begin(), xs.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

LogMean log_mean_exp(std::span<const double> xs) {
    LogMean r;
    const std::size_t n = xs.size();
    if (n == 0) throw std::invalid_argument("log_mean_exp: empty sample");
    const double m = *std::max_element(xs.begin(), xs.end());
    double s = 0.0, s2 = 0.0, top = 0.0;
    for (double x : xs) {
        const double w = std::exp(x - m);
        s += w;
        s2 += w * w;
        top = std::max(top, w);
    }
    const double mean = s / static_cast<double>(n);
    r.log_mean = m + std::log(mean);
    r.max_share = top / s;
    if (n > 1) {
        const double var = std::max(0.0, (s2 - s * mean) / static_cast<double>(n - 1));
        r.std_err = std::sqrt(var / static_cast<double>(n)) / mean;
    }
    return r;
}

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    const double lo = k == 0 ? 0.0 : std::max(0.0, centre - half);
    const double hi = k == n ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 paired points");
    LinearFit f;
    f.points = x.size();
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    const double sse = std::max(0.0, syy - f.slope * sxy);
    f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    if (x.size() > 2) f.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
    return f;
}

double student_t_quantile(double dof, double level) {
    boost::math::students_t dist(dof);
    return boost::math::quantile(dist, 0.5 + level / 2.0);
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

unsigned default_workers() {
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace pinlab
