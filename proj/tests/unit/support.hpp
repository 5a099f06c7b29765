#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace testing_support {

/// ζ(s) for s > 1 by a direct partial sum plus the Euler–Maclaurin tail.
inline double em_zeta(double s, std::size_t m = 1000) {
    double sum = 0.0;
    for (std::size_t n = m - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
    const double M = static_cast<double>(m);
    const double f = std::pow(M, -s);
    sum += M * f / (s - 1.0) + 0.5 * f + s * f / (12.0 * M) - s * (s + 1.0) * (s + 2.0) * f / (720.0 * M * M * M);
    return sum;
}

inline double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Standard error of the mean of independent draws.
inline double sem(const std::vector<double>& xs) {
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

}  // namespace testing_support
