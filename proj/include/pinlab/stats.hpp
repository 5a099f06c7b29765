#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pinlab {

struct MeanStderr {
    double mean = 0.0;
    double std_err = 0.0;
    std::size_t count = 0;
};

/// Welford accumulation in index order. Identical inputs give stderr exactly 0.
MeanStderr mean_stderr(std::span<const double> xs);

/// log(sum exp(x_i)); -inf for an empty span.
double log_sum_exp(std::span<const double> xs);

/// log of the mean of exp(x_i) with the delta-method standard error of that log.
struct LogMean {
    double log_mean = 0.0;
    double std_err = 0.0;
    double max_share = 0.0;  ///< largest single contribution to the sum
};
LogMean log_mean_exp(std::span<const double> xs);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Two-sided Student-t quantile for the given confidence level.
double student_t_quantile(double dof, double level = 0.95);

/// Runs body(i) for i in [0, count) on up to `workers` threads. Results must be
/// written into per-index slots; completion order never matters.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

/// std::thread::hardware_concurrency with a floor of 1.
unsigned default_workers();

}  // namespace pinlab
